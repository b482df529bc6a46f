//! An exhaustion together with lazily built stage models.

use std::sync::OnceLock;

use crate::curves::Curve;
use crate::error::{Error, Result};
use crate::model::{Color, StageModel};
use crate::surface::{build_blueprint, build_exhaustion, Exhaustion};
use crate::twists::MappingClass;
use crate::word::Letter;

#[derive(Debug)]
pub struct Atlas {
    ex: Exhaustion,
    models: Vec<OnceLock<StageModel>>,
}

impl Atlas {
    pub fn new(ex: Exhaustion) -> Self {
        let models = (0..=ex.stages).map(|_| OnceLock::new()).collect();
        Atlas { ex, models }
    }

    /// Blueprint of the given family, deep enough for `stages`.
    pub fn from_spec(end_spec: &str, stages: usize) -> Result<Self> {
        let bp = build_blueprint(end_spec, stages.max(1))?;
        Ok(Atlas::new(build_exhaustion(&bp, stages)?))
    }

    pub fn exhaustion(&self) -> &Exhaustion {
        &self.ex
    }

    pub fn stages(&self) -> usize {
        self.ex.stages
    }

    pub fn model(&self, n: usize) -> Result<&StageModel> {
        let cell = self
            .models
            .get(n)
            .ok_or(Error::StageOutOfRange { stage: n, built: self.ex.stages })?;
        Ok(cell.get_or_init(|| StageModel::build(&self.ex, n)))
    }

    pub fn top(&self) -> &StageModel {
        self.model(self.ex.stages).expect("top stage exists")
    }

    /// Chain curves `A_n`.
    pub fn chain(&self, n: usize) -> Result<Vec<String>> {
        Ok(self.model(n)?.chain.clone())
    }

    /// Marking of the stage neighbourhood `n`: `A_{n+1}` together with the
    /// boundary circles of stage `n`.
    pub fn marking(&self, n: usize) -> Result<Vec<String>> {
        let mut out = self.model(n + 1)?.chain.clone();
        out.extend(self.ex.boundary[n].iter().cloned());
        Ok(out)
    }

    pub fn named_stage(&self, id: &str) -> Result<usize> {
        self.top().meta(id).map(|m| m.stage).ok_or_else(|| Error::Unresolved(id.to_string()))
    }

    pub fn color(&self, id: &str) -> Option<Color> {
        self.top().meta(id).map(|m| m.color)
    }

    /// Least stage in which the curve and every twist curve it mentions live.
    pub fn curve_stage(&self, c: &Curve) -> Result<usize> {
        match c {
            Curve::Named(id) => self.named_stage(id),
            Curve::Image { of, word } => Ok(self.named_stage(of)?.max(self.word_stage(word)?)),
            Curve::Coords(cs) => cs.keys().try_fold(0, |s, id| Ok(s.max(self.named_stage(id)?))),
        }
    }

    pub fn curve_stage_all<'a>(&self, cs: impl IntoIterator<Item = &'a Curve>) -> Result<usize> {
        cs.into_iter().try_fold(0, |s, c| Ok(s.max(self.curve_stage(c)?)))
    }

    pub fn word_stage(&self, f: &MappingClass) -> Result<usize> {
        f.letters().iter().try_fold(0, |s, (c, _)| Ok(s.max(self.curve_stage(c)?)))
    }

    /// Cyclic word of a curve in the model of stage `n`.
    pub fn resolve(&self, c: &Curve, n: usize) -> Result<Vec<Letter>> {
        let m = self.model(n)?;
        match c {
            Curve::Named(id) => m.word(id).map(<[Letter]>::to_vec).ok_or_else(|| Error::Unresolved(id.clone())),
            Curve::Image { of, word } => {
                let base = m.word(of).ok_or_else(|| Error::Unresolved(of.clone()))?.to_vec();
                self.act(word, base, n)
            }
            Curve::Coords(_) => Err(Error::Unsupported("coordinate curve has no template ancestry".into())),
        }
    }

    /// Apply a twist word to a curve word in stage `n`; the leftmost letter acts last.
    pub fn act(&self, f: &MappingClass, mut x: Vec<Letter>, n: usize) -> Result<Vec<Letter>> {
        let m = self.model(n)?;
        for (c, k) in f.letters().iter().rev() {
            let cw = self.resolve(c, n)?;
            x = m.twist(&cw, *k, &x);
        }
        Ok(x)
    }
}

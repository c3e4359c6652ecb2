use crate::bits::{Label, LabelSet};
use crate::dims::ShatteringTree;
use crate::error::{Error, Result};
use crate::game::{Adversary, GameSpec, Prediction, Round};
use std::sync::Arc;

/// Walks a verified shattering tree along the learner's predictions.
#[derive(Debug, Clone)]
pub struct TreeAdversary {
    tree: Arc<ShatteringTree>,
}

pub fn shattering_tree_adversary(spec: &GameSpec, tree: ShatteringTree) -> Result<TreeAdversary> {
    tree.verify(spec)?;
    if tree.depth != spec.horizon {
        return Err(Error::TreeSpecMismatch(format!(
            "tree depth {} but horizon {}",
            tree.depth, spec.horizon
        )));
    }
    Ok(TreeAdversary {
        tree: Arc::new(tree),
    })
}

fn path(history: &[Round]) -> Result<Vec<Label>> {
    history.iter().map(|r| label_of(&r.prediction)).collect()
}

fn label_of(p: &Prediction) -> Result<Label> {
    match p {
        Prediction::Label(y) => Ok(*y),
        Prediction::Measure(m) => m
            .as_delta()
            .ok_or_else(|| Error::Unsupported("tree adversary needs label predictions".into())),
    }
}

impl TreeAdversary {
    pub fn tree(&self) -> &ShatteringTree {
        &self.tree
    }
}

impl Adversary for TreeAdversary {
    fn name(&self) -> String {
        "shattering_tree".into()
    }

    fn choose_instance(&mut self, history: &[Round]) -> Result<usize> {
        Ok(self.tree.node(&path(history)?))
    }

    fn reveal(&mut self, history: &[Round], _x: usize, prediction: &Prediction) -> Result<Label> {
        let mut p = path(history)?;
        p.push(label_of(prediction)?);
        Ok(self.tree.annotation(&p))
    }

    fn finalize_sets(&mut self, history: &[Round]) -> Result<Vec<LabelSet>> {
        let leaf = self.tree.leaf(&path(history)?);
        Ok(history.iter().map(|r| leaf[r.instance]).collect())
    }

    fn clone_box(&self) -> Box<dyn Adversary> {
        Box::new(self.clone())
    }
}

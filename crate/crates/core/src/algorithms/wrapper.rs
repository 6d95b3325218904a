use crate::error::{config, Result};
use crate::geometry::Point;
use crate::losses::Loss;
use crate::solver::SolveCertificate;

use super::{InnerRecord, Learner, StepInfo};

/// Plays a fixed point for blocks of `block` rounds and feeds the average
/// loss of each block to the inner learner.
pub struct BatchWrapper {
    inner: Box<dyn Learner>,
    block: usize,
    current: Point,
    pending: Vec<Loss>,
    record: InnerRecord,
}

impl BatchWrapper {
    pub fn new(inner: Box<dyn Learner>, block: usize) -> Result<Self> {
        if block == 0 {
            return Err(config("batch length must be at least 1"));
        }
        let current = inner.play().clone();
        let record = InnerRecord { points: vec![current.clone()], ..InnerRecord::default() };
        Ok(BatchWrapper { inner, block, current, pending: Vec::with_capacity(block), record })
    }

    pub fn block(&self) -> usize {
        self.block
    }

    fn flush(&mut self) -> Result<StepInfo> {
        let full = self.pending.len() == self.block;
        let avg = Loss::average(std::mem::take(&mut self.pending))?;
        let info = self.inner.observe(&avg)?;
        self.current = self.inner.play().clone();
        self.record.points.push(self.current.clone());
        self.record.losses.push(avg);
        self.record.certificates.push(info.certificate);
        self.record.etas.push(info.eta);
        if full {
            self.record.full_blocks += 1;
        }
        Ok(info)
    }
}

impl Learner for BatchWrapper {
    fn name(&self) -> String {
        format!("batch{}({})", self.block, self.inner.name())
    }

    fn play(&self) -> &Point {
        &self.current
    }

    fn observe(&mut self, loss: &Loss) -> Result<StepInfo> {
        self.pending.push(loss.clone());
        if self.pending.len() == self.block {
            self.flush()
        } else {
            Ok(StepInfo { certificate: SolveCertificate::exact(0.0), eta: None })
        }
    }

    fn finish(&mut self) -> Result<Option<StepInfo>> {
        if self.pending.is_empty() {
            Ok(None)
        } else {
            self.flush().map(Some)
        }
    }

    fn inner_record(&self) -> Option<InnerRecord> {
        Some(self.record.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::algorithms::{Ftl, Mode, SolvePolicy};
    use crate::geometry::{FeasibleSet, Norm};
    use crate::losses::CompositePart;

    fn ftl(set: &FeasibleSet) -> Box<dyn Learner> {
        let policy = SolvePolicy { mode: Mode::Exact, strict: true, horizon: 12 };
        Box::new(Ftl::new(set.clone(), CompositePart::none(), policy).unwrap())
    }

    fn quad(set: &FeasibleSet, c: f64) -> Loss {
        Loss::quadratic(Point::new(vec![c, -c]).unwrap(), 1.0, set, Norm::L2).unwrap()
    }

    #[test]
    fn block_of_one_is_transparent() {
        let set = FeasibleSet::centered_ball(2, 2.0).unwrap();
        let mut w = BatchWrapper::new(ftl(&set), 1).unwrap();
        let mut inner = ftl(&set);
        for k in 0..6 {
            let l = quad(&set, 0.1 * k as f64);
            w.observe(&l).unwrap();
            inner.observe(&l).unwrap();
            assert_eq!(w.play(), inner.play());
        }
    }

    #[test]
    fn holds_the_point_within_a_block_and_flushes_partial_blocks() {
        let set = FeasibleSet::centered_ball(2, 2.0).unwrap();
        let mut w = BatchWrapper::new(ftl(&set), 4).unwrap();
        let start = w.play().clone();
        for k in 0..3 {
            w.observe(&quad(&set, 0.2 * k as f64)).unwrap();
            assert_eq!(w.play(), &start);
        }
        w.observe(&quad(&set, 0.6)).unwrap();
        assert_ne!(w.play(), &start);
        w.observe(&quad(&set, 1.0)).unwrap();
        assert!(w.finish().unwrap().is_some());
        let rec = w.inner_record().unwrap();
        assert_eq!(rec.points.len(), 3);
        assert_eq!(rec.full_blocks, 1);
        assert!(w.finish().unwrap().is_none());
    }
}

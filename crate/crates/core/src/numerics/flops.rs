/// Floating-point operation tally for one instrumented computation.
///
/// A complex multiply-add counts as 8 real FLOPs and a complex add as 2.
/// Counters are plain values threaded through the `*_counted` kernels; there
/// is no global state.
#[derive(Debug, Default, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Flops(u64);

impl Flops {
    pub fn new() -> Self {
        Self(0)
    }

    pub fn count(&self) -> u64 {
        self.0
    }

    #[inline]
    pub fn cmac(&mut self, n: usize) {
        self.0 += 8 * n as u64;
    }

    #[inline]
    pub fn cadd(&mut self, n: usize) {
        self.0 += 2 * n as u64;
    }

    #[inline]
    pub fn real(&mut self, n: usize) {
        self.0 += n as u64;
    }

    pub fn absorb(&mut self, other: Flops) {
        self.0 += other.0;
    }
}

use num_complex::Complex64;

/// Index map of the two-mode basis truncated at total photon number `n_max`.
///
/// `|m_S, m_E⟩` with `N = m_S + m_E` sits at `N(N+1)/2 + m_S`, so each total-number shell is
/// a contiguous block of length `N + 1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct TwoModeBasis {
    pub n_max: usize,
}

impl TwoModeBasis {
    pub fn new(n_max: usize) -> Self {
        Self { n_max }
    }

    pub fn dim(&self) -> usize {
        (self.n_max + 1) * (self.n_max + 2) / 2
    }

    pub fn shell_offset(n: usize) -> usize {
        n * (n + 1) / 2
    }

    pub fn index(&self, m_s: usize, m_e: usize) -> Option<usize> {
        let n = m_s + m_e;
        (n <= self.n_max).then(|| Self::shell_offset(n) + m_s)
    }

    /// `(m_S, m_E)` of a basis index.
    pub fn levels(&self, idx: usize) -> (usize, usize) {
        // largest N with N(N+1)/2 <= idx
        let mut n = (((8 * idx + 1) as f64).sqrt() as usize).saturating_sub(1) / 2;
        while Self::shell_offset(n + 1) <= idx {
            n += 1;
        }
        while Self::shell_offset(n) > idx {
            n -= 1;
        }
        let m_s = idx - Self::shell_offset(n);
        (m_s, n - m_s)
    }

    /// Product state `a ⊗ b`, dropping components above `n_max`.
    pub fn product(&self, a: &[Complex64], b: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); self.dim()];
        for (m_s, &x) in a.iter().enumerate() {
            if x == Complex64::new(0.0, 0.0) {
                continue;
            }
            for (m_e, &y) in b.iter().enumerate() {
                if let Some(i) = self.index(m_s, m_e) {
                    out[i] = x * y;
                }
            }
        }
        out
    }

    /// Population in the top `shells` total-number shells.
    pub fn top_shell_population(&self, diag: impl Fn(usize) -> f64, shells: usize) -> f64 {
        let lo = self.n_max.saturating_sub(shells - 1);
        let start = Self::shell_offset(lo);
        (start..self.dim()).map(diag).sum()
    }
}

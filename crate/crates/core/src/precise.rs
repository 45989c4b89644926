//! Extended-precision evaluation of steady-cycle quantities and constrained
//! finite differences.
//!
//! Serves as the reference for the analytic derivatives. Quantities are
//! built stroke by stroke from the fixed-point equation
//! `n = cold(hot(n))` at 256-bit precision, so central differences with
//! relative step `1e-6` stay accurate even where the derivative is many
//! orders of magnitude below the function value.

use dashu_float::round::mode::HalfEven;
use dashu_float::FBig;

use crate::cycle::HeatKernel;

type F = FBig<HalfEven, 2>;

pub const PRECISION_BITS: usize = 256;

/// Relative step used by [`constrained_derivative`].
pub const FD_REL_STEP: f64 = 1e-6;

fn hp(x: f64) -> F {
    F::try_from(x).expect("finite input").with_precision(PRECISION_BITS).value()
}

fn to_f64(x: &F) -> f64 {
    x.to_f64().value()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rate {
    Hot,
    Cold,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Quantity {
    NbarSc,
    NbarH,
    DeltaNbar,
    ZetaH,
    ZetaC,
    /// Net power with per-photon costs `i_e`, `i_c` and frequency gap `d_omega`.
    Power {
        d_omega: f64,
        i_e: f64,
        i_c: f64,
        t_cycle: f64,
    },
}

struct Kernel {
    target_h: F,
    rate_h: F,
    target_c: F,
    rate_c: F,
    t_h: F,
    t_c: F,
}

impl Kernel {
    fn from(k: &HeatKernel) -> Self {
        Self {
            target_h: hp(k.target_h),
            rate_h: hp(k.rate_h),
            target_c: hp(k.target_c),
            rate_c: hp(k.rate_c),
            t_h: hp(k.t_h),
            t_c: hp(k.t_c),
        }
    }

    /// `(n_sc, n_h)`.
    fn photon_numbers(&self) -> (F, F) {
        let one = hp(1.0);
        let eh = (-(&self.rate_h * &self.t_h)).exp();
        let ec = (-(&self.rate_c * &self.t_c)).exp();
        // n = ((n - a_h) eh + a_h - a_c) ec + a_c  ⇒  n (1 - eh ec) = a_h (1 - eh) ec + a_c (1 - ec)
        let num = &self.target_h * (&one - &eh) * &ec + &self.target_c * (&one - &ec);
        let n_sc = num / (&one - &eh * &ec);
        let n_h = (&n_sc - &self.target_h) * &eh + &self.target_h;
        (n_sc, n_h)
    }

    fn eval(&self, q: Quantity) -> F {
        let (n_sc, n_h) = self.photon_numbers();
        let dn = &n_h - &n_sc;
        match q {
            Quantity::NbarSc => n_sc,
            Quantity::NbarH => n_h,
            Quantity::DeltaNbar => dn,
            Quantity::ZetaH => n_h / dn,
            Quantity::ZetaC => n_sc / dn,
            Quantity::Power {
                d_omega,
                i_e,
                i_c,
                t_cycle,
            } => (hp(d_omega) * &dn - hp(i_e) * &n_h - hp(i_c) * &n_sc) / hp(t_cycle),
        }
    }
}

/// `q` evaluated at extended precision and rounded to `f64`.
pub fn evaluate(kernel: &HeatKernel, q: Quantity) -> f64 {
    to_f64(&Kernel::from(kernel).eval(q))
}

/// Central difference of `q` in `Δ_h` or `Δ_c` with `E/Δ` held fixed, step
/// `FD_REL_STEP · Δ`.
pub fn constrained_derivative(kernel: &HeatKernel, rate: Rate, q: Quantity) -> f64 {
    let base = Kernel::from(kernel);
    let d = match rate {
        Rate::Hot => &base.rate_h,
        Rate::Cold => &base.rate_c,
    };
    let h = d * hp(FD_REL_STEP);
    let shifted = |sign: f64| {
        let mut k = Kernel::from(kernel);
        let target = match rate {
            Rate::Hot => &mut k.rate_h,
            Rate::Cold => &mut k.rate_c,
        };
        *target = &*target + &h * hp(sign);
        k.eval(q)
    };
    let diff = shifted(1.0) - shifted(-1.0);
    to_f64(&(diff / (hp(2.0) * &h)))
}

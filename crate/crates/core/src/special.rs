//! Special functions: Gamma family wrappers, Beta, incomplete Gamma with a
//! negative parameter, and Bessel J/I of real order.

use std::f64::consts::PI;

use statrs::function::gamma as sg;

pub fn gamma(x: f64) -> f64 {
    sg::gamma(x)
}

pub fn ln_gamma(x: f64) -> f64 {
    sg::ln_gamma(x)
}

/// `1/Γ(x)`, zero at the poles `x = 0, -1, -2, …`.
pub fn rgamma(x: f64) -> f64 {
    if x <= 0.0 && x == x.floor() {
        return 0.0;
    }
    if x > 171.0 {
        return (-ln_gamma(x)).exp();
    }
    1.0 / gamma(x)
}

/// Euler Beta `B(a, b)` for positive arguments, through log-gamma.
pub fn beta(a: f64, b: f64) -> f64 {
    (ln_gamma(a) + ln_gamma(b) - ln_gamma(a + b)).exp()
}

/// Regularized lower incomplete gamma `P(s, x)`, `s > 0`, `x >= 0`.
pub fn gamma_p(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 0.0;
    }
    if x.is_infinite() {
        return 1.0;
    }
    sg::gamma_lr(s, x)
}

/// Regularized upper incomplete gamma `Q(s, x)`, `s > 0`, `x >= 0`.
pub fn gamma_q(s: f64, x: f64) -> f64 {
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    sg::gamma_ur(s, x)
}

/// Upper incomplete gamma `Γ(s, x)` for `s > 0`.
pub fn upper_gamma(s: f64, x: f64) -> f64 {
    gamma_q(s, x) * gamma(s)
}

/// Lower incomplete gamma `γ(s, x)` for `s > 0`.
pub fn lower_gamma(s: f64, x: f64) -> f64 {
    gamma_p(s, x) * gamma(s)
}

/// Upper incomplete gamma `Γ(s, x)` for `-1 < s < 0`, `x > 0`, from
/// `Γ(s+1, x) = s Γ(s, x) + x^s e^{-x}` applied downward.
pub fn upper_gamma_negative(s: f64, x: f64) -> f64 {
    debug_assert!(s > -1.0 && s < 0.0);
    if x <= 0.0 {
        return f64::INFINITY;
    }
    (upper_gamma(s + 1.0, x) - (s * x.ln() - x).exp()) / s
}

/// Bessel function of the first kind `J_ν(x)`, real order, `x >= 0`.
pub fn bessel_j(nu: f64, x: f64) -> f64 {
    bessel(nu, x, Kind::J)
}

/// Modified Bessel function of the first kind `I_ν(x)`, real order, `x >= 0`.
pub fn bessel_i(nu: f64, x: f64) -> f64 {
    bessel(nu, x, Kind::I)
}

#[derive(Clone, Copy, PartialEq)]
enum Kind {
    J,
    I,
}

// Beyond these arguments the series is replaced by the large-argument
// expansion. For J the alternating series loses about log10(I_0(x)) digits,
// so the switch happens earlier than for I.
const J_SWITCH: f64 = 12.0;
const I_SWITCH: f64 = 20.0;

fn bessel(nu: f64, x: f64, kind: Kind) -> f64 {
    if x.is_nan() || nu.is_nan() || x < 0.0 {
        return f64::NAN;
    }
    if nu < 0.0 && nu == nu.floor() {
        // J_{-n} = (-1)^n J_n, I_{-n} = I_n
        let n = -nu;
        let v = bessel(n, x, kind);
        return match kind {
            Kind::J if (n as i64) % 2 == 1 => -v,
            _ => v,
        };
    }
    if x == 0.0 {
        return if nu == 0.0 {
            1.0
        } else if nu > 0.0 {
            0.0
        } else {
            // leading term (x/2)^ν / Γ(ν+1) with ν < 0 non-integer
            rgamma(nu + 1.0).signum() * f64::INFINITY
        };
    }
    let switch = match kind {
        Kind::J => J_SWITCH,
        Kind::I => I_SWITCH,
    } + nu * nu;
    if x > switch {
        match kind {
            Kind::J => hankel_j(nu, x),
            Kind::I => asymptotic_i(nu, x),
        }
    } else {
        ascending_series(nu, x, kind)
    }
}

fn ascending_series(nu: f64, x: f64, kind: Kind) -> f64 {
    let half = 0.5 * x;
    let q = match kind {
        Kind::J => -half * half,
        Kind::I => half * half,
    };
    let mut term = (nu * half.ln()).exp() * rgamma(nu + 1.0);
    let mut sum = term;
    let peak = half.max(1.0);
    for k in 0..1000 {
        let kf = k as f64;
        term *= q / ((kf + 1.0) * (kf + 1.0 + nu));
        sum += term;
        if kf > peak && term.abs() <= 1e-17 * sum.abs() {
            break;
        }
    }
    sum
}

/// Hankel's expansion `J_ν(x) = √(2/(πx)) [P cos ω − Q sin ω]`.
fn hankel_j(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut p = 1.0;
    let mut q = 0.0;
    let mut a = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let next = a * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if next.abs() > last.abs() && k > 2 {
            break;
        }
        a = next;
        last = next;
        // a_k enters P (k even) or Q (k odd) with sign (-1)^{floor(k/2)}
        let sign = if (k / 2) % 2 == 0 { 1.0 } else { -1.0 };
        if k % 2 == 0 {
            p += sign * a;
        } else {
            q += sign * a;
        }
        if a.abs() < 1e-17 {
            break;
        }
    }
    let omega = x - (0.5 * nu + 0.25) * PI;
    (2.0 / (PI * x)).sqrt() * (p * omega.cos() - q * omega.sin())
}

/// `I_ν(x) ~ e^x / √(2πx) Σ (−1)^k a_k(ν) / x^k`.
fn asymptotic_i(nu: f64, x: f64) -> f64 {
    let mu = 4.0 * nu * nu;
    let mut sum = 1.0;
    let mut a = 1.0_f64;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let kf = k as f64;
        let next = -a * (mu - (2.0 * kf - 1.0).powi(2)) / (kf * 8.0 * x);
        if next.abs() > last.abs() && k > 2 {
            break;
        }
        a = next;
        last = next;
        sum += a;
        if a.abs() < 1e-17 {
            break;
        }
    }
    if x > 700.0 {
        // split the exponential to delay overflow
        let e = (0.5 * x).exp();
        return e * (e / (2.0 * PI * x).sqrt()) * sum;
    }
    x.exp() / (2.0 * PI * x).sqrt() * sum
}

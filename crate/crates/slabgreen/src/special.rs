//! Complete elliptic integrals and scaled modified Bessel functions.
//!
//! Everything here is plumbing for the kernel modules: `ellip_ke` backs the
//! per-image-term closed form of the cosine-weighted angular kernels, and the
//! scaled Bessel quartet backs the vertical-eigenfunction representation of
//! the slab kernel. Accuracy target is ~1e-14 relative, checked against
//! frozen mpmath (dps=40) values in the tests below.

use std::sync::OnceLock;

const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;

/// Complete elliptic integrals K(m) and E(m) in the parameter convention
/// (m = k^2), computed by the arithmetic-geometric mean.
///
/// Valid for 0 <= m < 1. Near m = 1 the subtraction 1 - m loses digits;
/// callers that know the complementary parameter should use [`ellip_ke_mc`].
pub fn ellip_ke(m: f64) -> (f64, f64) {
    ellip_ke_mc(1.0 - m)
}

/// K and E from the complementary parameter mc = 1 - m. Accurate for all
/// mc in (0, 1]; K diverges like -0.5 ln(mc/16) as mc -> 0.
pub fn ellip_ke_mc(mc: f64) -> (f64, f64) {
    debug_assert!(mc > 0.0 && mc <= 1.0, "complementary parameter out of range: {mc}");
    let mut a = 1.0_f64;
    let mut b = mc.sqrt();
    let mut c2_sum = 0.5 * (1.0 - mc); // 2^(n-1) * c_n^2 accumulated, n = 0 term
    let mut pow2 = 1.0_f64;
    for _ in 0..40 {
        let c = 0.5 * (a - b);
        let an = 0.5 * (a + b);
        let bn = (a * b).sqrt();
        c2_sum += pow2 * c * c;
        pow2 *= 2.0;
        a = an;
        b = bn;
        if (a - b).abs() <= f64::EPSILON * a {
            break;
        }
    }
    let k = std::f64::consts::FRAC_PI_2 / a;
    let e = k * (1.0 - c2_sum);
    (k, e)
}

/// Derivatives of K and E with respect to the parameter m.
pub fn ellip_ke_dm(m: f64) -> (f64, f64) {
    let (k, e) = ellip_ke(m);
    let dk = (e - (1.0 - m) * k) / (2.0 * m * (1.0 - m));
    let de = (e - k) / (2.0 * m);
    (dk, de)
}

// ---------------------------------------------------------------------------
// Scaled modified Bessel functions.
// ---------------------------------------------------------------------------

/// e^-x I0(x) for x >= 0.
pub fn i0e(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 20.0 {
        i_series(0, x) * (-x).exp()
    } else {
        i_asymptotic(0.0, x)
    }
}

/// e^-x I1(x) for x >= 0.
pub fn i1e(x: f64) -> f64 {
    debug_assert!(x >= 0.0);
    if x < 20.0 {
        i_series(1, x) * (-x).exp()
    } else {
        i_asymptotic(4.0, x)
    }
}

/// e^x K0(x) for x > 0.
pub fn k0e(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 2.0 {
        // K0 = -(ln(x/2)+gamma) I0 + sum_{k>=1} (x^2/4)^k / (k!)^2 * H_k
        let i0 = i_series(0, x);
        let mut sum = 0.0;
        let q = 0.25 * x * x;
        let mut term = 1.0;
        let mut h = 0.0;
        for k in 1..30 {
            term *= q / ((k * k) as f64);
            h += 1.0 / k as f64;
            sum += term * h;
            if term * h < 1e-18 * sum.abs().max(1.0) {
                break;
            }
        }
        (-( (0.5 * x).ln() + EULER_GAMMA) * i0 + sum) * x.exp()
    } else if x < 20.0 {
        k_integral(0, x)
    } else {
        k_asymptotic(0.0, x)
    }
}

/// e^x K1(x) for x > 0.
pub fn k1e(x: f64) -> f64 {
    debug_assert!(x > 0.0);
    if x <= 2.0 {
        // K1 = 1/x + ln(x/2) I1 - (x/4) sum_k (H_k + H_{k+1} - 2 gamma) q^k / (k!(k+1)!)
        let i1 = i_series(1, x);
        let q = 0.25 * x * x;
        let mut term = 1.0; // q^k / (k!(k+1)!)
        let mut hk = 0.0;
        let mut hk1 = 1.0;
        let mut sum = term * (hk + hk1 - 2.0 * EULER_GAMMA);
        for k in 1..30 {
            term *= q / ((k * (k + 1)) as f64);
            hk += 1.0 / k as f64;
            hk1 += 1.0 / (k + 1) as f64;
            let t = term * (hk + hk1 - 2.0 * EULER_GAMMA);
            sum += t;
            if term < 1e-18 {
                break;
            }
        }
        (1.0 / x + (0.5 * x).ln() * i1 - 0.25 * x * sum) * x.exp()
    } else if x < 20.0 {
        k_integral(1, x)
    } else {
        k_asymptotic(4.0, x)
    }
}

/// Power series for I_nu (nu = 0 or 1); all terms positive, no cancellation.
fn i_series(nu: u32, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut term = if nu == 0 { 1.0 } else { 0.5 * x };
    let mut sum = term;
    for k in 1..80u32 {
        term *= q / ((k * (k + nu)) as f64);
        sum += term;
        if term < 1e-18 * sum {
            break;
        }
    }
    sum
}

/// Large-argument expansion of e^-x I_nu(x), mu = 4 nu^2.
fn i_asymptotic(mu: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..30 {
        let kf = k as f64;
        let odd = 2.0 * kf + 1.0;
        term *= -(mu - odd * odd) / ((kf + 1.0) * 8.0 * x);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum / (2.0 * std::f64::consts::PI * x).sqrt()
}

/// Large-argument expansion of e^x K_nu(x), mu = 4 nu^2.
fn k_asymptotic(mu: f64, x: f64) -> f64 {
    let mut term = 1.0;
    let mut sum = 1.0;
    for k in 0..30 {
        let kf = k as f64;
        let odd = 2.0 * kf + 1.0;
        term *= (mu - odd * odd) / ((kf + 1.0) * 8.0 * x);
        sum += term;
        if term.abs() < 1e-18 {
            break;
        }
    }
    sum * (std::f64::consts::FRAC_PI_2 / x).sqrt()
}

/// e^x K_nu(x) on the mid range via Gauss-Legendre on
/// K_nu(x) = int_0^inf e^{-x cosh t} cosh(nu t) dt.
fn k_integral(nu: u32, x: f64) -> f64 {
    // e^{-x(cosh T - 1)} <= e^-45 past the cutoff; the discarded tail is
    // far below the 1e-15 relative target.
    let t_max = (1.0 + 45.0 / x).acosh();
    let (nodes, weights) = gl64();
    let mut total = 0.0;
    // two panels keep the GL error negligible across the whole x range
    for panel in 0..2 {
        let lo = t_max * 0.5 * panel as f64;
        let hi = lo + 0.5 * t_max;
        let c = 0.5 * (hi + lo);
        let hw = 0.5 * (hi - lo);
        let mut acc = 0.0;
        for (xi, wi) in nodes.iter().zip(weights) {
            let t = c + hw * xi;
            let f = (-x * (t.cosh() - 1.0)).exp() * if nu == 1 { t.cosh() } else { 1.0 };
            acc += wi * f;
        }
        total += acc * hw;
    }
    total
}

fn gl64() -> (&'static [f64], &'static [f64]) {
    static CACHE: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    let (n, w) = CACHE.get_or_init(|| gauss_legendre(64));
    (n, w)
}

/// Gauss-Legendre nodes and weights on [-1, 1], Newton iteration on P_n.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // recurrence for P_n(x) and P'_n(x)
            let mut p0 = 1.0;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rel(a: f64, b: f64) -> f64 {
        (a - b).abs() / b.abs().max(1e-300)
    }

    #[test]
    fn elliptic_against_mpmath() {
        // (m, K(m), E(m)) frozen from mpmath at dps=40
        let table = [
            (0.001, 1.571189246923344418322, 1.570403554051423672316),
            (0.1, 1.61244134872021939823, 1.530757636897763202469),
            (0.3, 1.713889448178791062039, 1.445363064412665262012),
            (0.5, 1.854074677301371918434, 1.35064388104767550252),
            (0.7, 2.075363135292469143853, 1.241670567945822750872),
            (0.9, 2.578092113348173188203, 1.10477473270407332609),
            (0.99, 3.69563736298987467781, 1.015993545025223935639),
        ];
        for &(m, k_ref, e_ref) in &table {
            let (k, e) = ellip_ke(m);
            assert!(rel(k, k_ref) < 2e-15, "K({m}): {k} vs {k_ref}");
            assert!(rel(e, e_ref) < 4e-15, "E({m}): {e} vs {e_ref}");
        }
        // near m = 1 through the complementary parameter
        let (k, e) = ellip_ke_mc(1e-6);
        assert!(rel(k, 8.294051463615439985316) < 4e-15, "{k}");
        assert!(rel(e, 1.000003897026172061153) < 4e-15, "{e}");
    }

    #[test]
    fn elliptic_parameter_derivatives() {
        for &m in &[0.05, 0.3, 0.6, 0.9] {
            let h = 1e-6;
            let (kp, ep) = ellip_ke(m + h);
            let (km, em) = ellip_ke(m - h);
            let (dk, de) = ellip_ke_dm(m);
            assert!(rel(dk, (kp - km) / (2.0 * h)) < 1e-8);
            assert!(rel(de, (ep - em) / (2.0 * h)) < 1e-8);
        }
    }

    #[test]
    fn scaled_bessel_against_mpmath() {
        // (x, i0e, i1e, k0e, k1e) frozen from mpmath at dps=40
        let table = [
            (0.02, 0.98029669562460988893, 0.0098024768405725967471, 4.1098375666725696697, 50.963870056301311599),
            (0.5, 0.64503527044915006811, 0.15642080318487169714, 1.52410938577390953, 2.7310097082117857054),
            (1.0, 0.4657596075936404365, 0.20791041534970844887, 1.1444630798068950147, 1.6361534862632582465),
            (2.0, 0.30850832255367103953, 0.21526928924893765916, 0.84156821507077141792, 1.0334768470686885732),
            (3.0, 0.24300035416182539847, 0.19682671329730085363, 0.69776159804385177606, 0.80656348012878690333),
            (5.0, 0.18354081260932835307, 0.16397226694454235693, 0.54780756431351898687, 0.60027385878831258294),
            (8.0, 0.14343178185685031071, 0.13414249329269817831, 0.43662301860158611262, 0.46314909287049610585),
            (12.0, 0.11642622121344044298, 0.11146429929018097642, 0.35819487848907821528, 0.372831753369709876),
            (19.5, 0.090939432095156483305, 0.088576086094314852457, 0.28205028321567020271, 0.28919403285359758594),
            (20.5, 0.088664429015745248147, 0.086474113494087245571, 0.27516703550431326396, 0.28180029606246619342),
            (50.0, 0.05656162664745419253, 0.055993123892895399644, 0.17680715585742933811, 0.1785665585588155746),
            (200.0, 0.02822715994911191567, 0.028156503394832917822, 0.088567458339296658234, 0.088788601585003679764),
            (1000.0, 0.012617240455891256586, 0.01261093025692862947, 0.039628321600754217115, 0.03964813081296021048),
            (15000.0, 0.0032573772249547866799, 0.0032572686439041801837, 0.010233181805436896586, 0.01023352290581235578),
        ];
        for &(x, i0_ref, i1_ref, k0_ref, k1_ref) in &table {
            assert!(rel(i0e(x), i0_ref) < 1e-13, "i0e({x})");
            assert!(rel(i1e(x), i1_ref) < 1e-13, "i1e({x})");
            assert!(rel(k0e(x), k0_ref) < 1e-13, "k0e({x}): {} vs {}", k0e(x), k0_ref);
            assert!(rel(k1e(x), k1_ref) < 1e-13, "k1e({x}): {} vs {}", k1e(x), k1_ref);
        }
    }

    #[test]
    fn bessel_tail_bound_premises() {
        // The certified eigen-series tails rely on these global inequalities.
        let sqrt_half_pi = |x: f64| (std::f64::consts::FRAC_PI_2 / x).sqrt();
        let mut x = 0.05;
        while x < 300.0 {
            assert!(k0e(x) <= sqrt_half_pi(x) * 1.0000001, "K0 premise at {x}");
            assert!(k1e(x) <= sqrt_half_pi(x) * (1.0 + 0.5 / x) * 1.0000001, "K1 premise at {x}");
            if x >= 1.0 {
                assert!(
                    i1e(x) <= 1.0000001 / (2.0 * std::f64::consts::PI * x).sqrt(),
                    "I1 premise at {x}"
                );
            }
            assert!(i1e(x) <= 0.5 * x * 1.0000001, "I1 small premise at {x}");
            x *= 1.17;
        }
    }

    #[test]
    fn gauss_legendre_exactness() {
        // degree-2n-1 exactness on polynomials, plus a transcendental check
        let (n, w) = gauss_legendre(12);
        let integ = |f: &dyn Fn(f64) -> f64| -> f64 {
            n.iter().zip(&w).map(|(x, wi)| wi * f(*x)).sum()
        };
        assert!((integ(&|x| x.powi(10)) - 2.0 / 11.0).abs() < 1e-14);
        assert!((integ(&|x| x.powi(23))).abs() < 1e-14);
        assert!((integ(&|x: f64| x.cos()) - 2.0 * 1.0_f64.sin()).abs() < 1e-13);
    }
}

//! Precomputed coefficient tables.
//!
//! Riemann–Siegel correction functions C0..C3 are stored as Chebyshev series in
//! x = 2p − 1 on p ∈ [0, 1] (constant term already halved), generated with 50-digit
//! arithmetic by `tests/oracle/gen_tables.py`.

pub(crate) const RS_C0: [f64; 29] = [
    0.6426672862397684, 0.0, 0.27197299999785507, 0.0, 0.010738605819340285, 0.0,
    -0.0013743815296336614, 0.0, -0.00012468221880320676, 0.0, -5.764599706783048e-07, 0.0,
    2.728067429580452e-07, 0.0, 8.07795305950047e-09, 0.0, -2.0884608068869654e-10, 0.0,
    -1.3115561854739528e-11, 0.0, -1.4207987228087186e-14, 0.0, 1.0271701357931162e-14, 0.0,
    1.3974598819518373e-16, 0.0, -4.4841187339522885e-18, 0.0, -1.1830599573845289e-19,
];

pub(crate) const RS_C1: [f64; 30] = [
    0.0, 0.010697913921003001, 0.0, 0.017170651243377882, 0.0, 0.002793211149788471, 0.0,
    -3.6375653719275045e-05, 0.0, -2.7108955231150888e-05, 0.0, -1.0483749866752774e-06, 0.0,
    5.886467166527572e-08, 0.0, 4.322967268502779e-09, 0.0, -1.1369591588273712e-11, 0.0,
    -6.6998339103553274e-12, 0.0, -1.0079997652808475e-13, 0.0, 5.152488009222117e-15, 0.0,
    1.521695447183697e-16, 0.0, -1.8619464833687103e-18, 0.0, -1.1301846184246265e-19,
];

pub(crate) const RS_C2: [f64; 29] = [
    0.0031461158539889122, 0.0, -0.0023087838845307503, 0.0, 5.769820766689844e-05, 0.0,
    0.000352388620236659, 0.0, 2.5246667458684434e-05, 0.0, -3.442821197193136e-06, 0.0,
    -3.535074556622459e-07, 0.0, 3.730830183792625e-09, 0.0, 1.2776951864116635e-09, 0.0,
    2.1874616204147057e-11, 0.0, -1.914141096461037e-12, 0.0, -6.562883102168523e-14, 0.0,
    1.2586009182411715e-15, 0.0, 8.140076623881463e-17, 0.0, -5.423874275488608e-20,
];

pub(crate) const RS_C3: [f64; 30] = [
    0.0, 7.123256221203874e-05, 0.0, 0.00023234305298164808, 0.0, -0.00012929912045472474, 0.0,
    1.807449641367144e-05, 0.0, 6.5261851872204395e-06, 0.0, -1.1696365378521986e-07, 0.0,
    -7.349476126518126e-08, 0.0, -1.7750910077907072e-09, 0.0, 2.555552961326525e-10, 0.0,
    1.13766366005373e-11, 0.0, -3.349863898530277e-13, 0.0, -2.5537379354163893e-14, 0.0,
    6.766500771321871e-17, 0.0, 2.976888471991973e-17, 0.0, 2.9952208087566915e-19,
];

/// B_{2k}/(2k)! for k = 1..=31.
pub(crate) const BERNOULLI_SCALED: [f64; 31] = [
    0.08333333333333333,
    -0.001388888888888889,
    3.306878306878307e-05,
    -8.267195767195768e-07,
    2.08767569878681e-08,
    -5.284190138687493e-10,
    1.3382536530684679e-11,
    -3.3896802963225827e-13,
    8.586062056277845e-15,
    -2.174868698558062e-16,
    5.5090028283602295e-18,
    -1.3954464685812522e-19,
    3.534707039629467e-21,
    -8.953517427037546e-23,
    2.267952452337683e-24,
    -5.744790668872202e-26,
    1.455172475614865e-27,
    -3.6859949406653103e-29,
    9.336734257095045e-31,
    -2.36502241570063e-32,
    5.990671762482134e-34,
    -1.5174548844682903e-35,
    3.843758125454189e-37,
    -9.736353072646691e-39,
    2.466247044200681e-40,
    -6.247076741820743e-42,
    1.5824030244644914e-43,
    -4.008273685948936e-45,
    1.0153075855569557e-46,
    -2.5718041582418717e-48,
    6.514456035233815e-50,
];

/// Clenshaw evaluation of Σ c_k T_k(x).
pub(crate) fn chebyshev(coeffs: &[f64], x: f64) -> f64 {
    let mut b1 = 0.0;
    let mut b2 = 0.0;
    for &c in coeffs.iter().skip(1).rev() {
        let b0 = 2.0 * x * b1 - b2 + c;
        b2 = b1;
        b1 = b0;
    }
    x * b1 - b2 + coeffs[0]
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clenshaw_matches_direct_chebyshev_sum() {
        let c = [0.5, -0.25, 0.125, 2.0];
        for &x in &[-1.0, -0.3, 0.0, 0.7, 1.0] {
            let t: [f64; 4] = [1.0, x, 2.0 * x * x - 1.0, 4.0 * x * x * x - 3.0 * x];
            let direct: f64 = c.iter().zip(t).map(|(a, b)| a * b).sum();
            assert!((chebyshev(&c, x) - direct).abs() < 1e-15);
        }
    }

    #[test]
    fn c0_matches_closed_form() {
        // Ψ(p) = cos(2π(p² − p − 1/16)) / cos(2πp)
        for &p in &[0.1f64, 0.3, 0.6, 0.9] {
            let two_pi = 2.0 * std::f64::consts::PI;
            let psi = (two_pi * (p * p - p - 1.0 / 16.0)).cos() / (two_pi * p).cos();
            assert!((chebyshev(&RS_C0, 2.0 * p - 1.0) - psi).abs() < 1e-14, "p = {p}");
        }
    }

    #[test]
    fn bernoulli_ratios_match_exact_rationals() {
        assert!((BERNOULLI_SCALED[0] - 1.0 / 12.0).abs() < 1e-17);
        assert!((BERNOULLI_SCALED[1] + 1.0 / 720.0).abs() < 1e-18);
        assert!((BERNOULLI_SCALED[2] - 1.0 / 30240.0).abs() < 1e-20);
    }
}

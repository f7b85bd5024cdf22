//! Closed forms against the exact engine over sampled parameters.

use proptest::prelude::*;
use tls_coherence::analytic::{
    c0_transferred_low_t, c0_transferred_low_t_n, c1_direct_exact, c1_direct_low_t, c1_direct_low_t_n,
    c2_indirect_low_t, ct_indirect_low_t_n,
};
use tls_coherence::coherence::SpectralCoherence;
use tls_coherence::models::{direct_model, indirect_model, transferred_model, Model};
use tls_coherence::operator::OperatorSpec;

fn coherences(spec: &OperatorSpec, t: f64) -> Vec<f64> {
    SpectralCoherence::for_spec(spec).unwrap().at(t).unwrap()
}

fn min_of(v: &[f64]) -> f64 {
    v.iter().cloned().fold(f64::INFINITY, f64::min)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn direct_closed_form_everywhere(g in 0.01f64..3.0, w1 in 0.1f64..3.0, w2 in 0.1f64..3.0, lt in -2.5f64..2.5) {
        let t = 10f64.powf(lt);
        let c = coherences(&direct_model(w1, w2, g).unwrap(), t);
        prop_assert!((c[0] - c1_direct_exact(g, w1, w2, t).unwrap()).abs() <= 1e-10);
        prop_assert!(c[1] <= 1e-12);
    }

    #[test]
    fn low_temperature_formulas(
        w0 in 0.5f64..2.0,
        w1 in 0.5f64..2.0,
        w2 in 0.5f64..2.0,
        gf in 0.05f64..1.0,
        tf in 0.05f64..1.0,
    ) {
        let scale = min_of(&[w0, w1, w2]);
        let (g, th) = (gf * scale, tf * scale);
        let t = 1e-3 * min_of(&[w0, w1, w2, g, th]);

        let c1 = coherences(&direct_model(w1, w2, g).unwrap(), t)[0];
        prop_assert!((c1 - c1_direct_low_t(g, w1, t).unwrap()).abs() <= 1e-3);

        let c2 = coherences(&indirect_model(w1, w2, g, th).unwrap(), t)[1];
        prop_assert!((c2 - c2_indirect_low_t(g, th, w1, w2).unwrap()).abs() <= 1e-3, "{} vs formula", c2);

        let c0 = coherences(&transferred_model(w0, w1, w2, g, th).unwrap(), t)[0];
        prop_assert!((c0 - c0_transferred_low_t(g, th, w0, w1).unwrap()).abs() <= 1e-3);
    }

    #[test]
    fn n_source_low_temperature_formulas(n in 1usize..5, w0 in 0.5f64..2.0, w1 in 0.5f64..2.0, ws in 0.5f64..2.0, gf in 0.05f64..1.0) {
        let g = gf * min_of(&[w0, w1, ws]) / n as f64;
        let t = 1e-3 * min_of(&[w0, w1, ws, g]);
        let spec = Model::direct_n_uniform(w1, n, ws, g).spec().unwrap();
        prop_assert!((coherences(&spec, t)[0] - c1_direct_low_t_n(&vec![g; n], w1).unwrap()).abs() <= 1e-3);
        let spec = Model::transferred_n_uniform(w0, w1, n, ws, g, 0.5 * w0).spec().unwrap();
        prop_assert!((coherences(&spec, t)[0] - c0_transferred_low_t_n(n, g, 0.5 * w0, w0, w1).unwrap()).abs() <= 1e-3);
    }

    // leading order only, so sampled deep inside its weak-coupling regime
    #[test]
    fn indirect_n_leading_order(n in 1usize..4, wt in 0.5f64..2.0, ws in 0.5f64..2.0, gf in 0.01f64..0.1) {
        let g = gf * wt.min(ws) / (n as f64).sqrt();
        let t = 1e-3 * g * g;
        let spec = Model::indirect_n_uniform(wt, n, ws, g, g).spec().unwrap();
        let ct = coherences(&spec, t)[0];
        prop_assert!((ct - ct_indirect_low_t_n(n, g, ws, wt).unwrap()).abs() <= 1e-3);
    }

    #[test]
    fn ratio_of_transferred_to_direct(x in 0.1f64..3.0, w0 in 0.5f64..2.0, g in 0.1f64..2.0, w1 in 0.5f64..2.0) {
        let t = 1e-3 * min_of(&[w0, w1, g, x * w0]);
        let c1 = coherences(&direct_model(w1, 1.3, g).unwrap(), t)[0];
        let c0 = coherences(&transferred_model(w0, w1, 1.3, g, x * w0).unwrap(), t)[0];
        prop_assert!((c0 / c1 - x / (1.0 + c1 * c1 * x * x).sqrt()).abs() <= 1e-2);
    }

    #[test]
    fn partner_never_exceeds_first(g in 0.05f64..4.0, th in 0.05f64..4.0, w1 in 0.2f64..2.0, w2 in 0.2f64..2.0) {
        let t = 1e-3 * min_of(&[g, th, w1, w2]);
        let c = coherences(&indirect_model(w1, w2, g, th).unwrap(), t);
        prop_assert!(c[1] <= c[0] + 1e-9, "C2 = {} > C1 = {}", c[1], c[0]);
    }
}

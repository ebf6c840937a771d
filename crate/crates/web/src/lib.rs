//! wasm-bindgen bindings for the static demo page in `www/`.
//!
//! The page builds one [`Explorer`] per map and calls it for renders and
//! point evaluations.

use num_complex::Complex64;
use serde::Serialize;
use wasm_bindgen::prelude::*;

use parafatou::chessboard::{render_with, Chessboard, RasterJob, RenderMode, Window};
use parafatou::fatou::DEFAULT_TOL;
use parafatou::maps::{MapSpec, ParabolicMap};

fn js_err(e: parafatou::Error) -> JsError {
    JsError::new(&e.to_string())
}

#[derive(Serialize)]
struct Summary {
    kind: String,
    /// Kind whose germ the numbers describe (`c_d` for the Blaschke products).
    germ_of: String,
    gamma: [f64; 2],
    v_prime: [f64; 2],
    critical_value: [f64; 2],
    critical_modulus: f64,
}

/// Classifier and Fatou data of one map, built once per map selection.
#[wasm_bindgen]
pub struct Explorer {
    map: ParabolicMap,
    board: Chessboard,
}

#[wasm_bindgen]
impl Explorer {
    /// `map_json` uses the CLI schema, e.g. `{"v":1,"kind":"c_d","d":2}`.
    #[wasm_bindgen(constructor)]
    pub fn new(map_json: &str, budget: usize) -> Result<Explorer, JsError> {
        let map = MapSpec::from_json(map_json).and_then(|s| s.build()).map_err(js_err)?;
        let board = Chessboard::new(&map, budget, DEFAULT_TOL).map_err(js_err)?;
        Ok(Explorer { map, board })
    }

    /// RGBA pixels of a chessboard; `mode` is `"dynamical"` or `"structural"`.
    pub fn render(
        &self,
        mode: &str,
        center_re: f64,
        center_im: f64,
        width: f64,
        nx: usize,
        ny: usize,
    ) -> Result<Vec<u8>, JsError> {
        let mode: RenderMode = mode.parse().map_err(js_err)?;
        let job = RasterJob {
            window: Window { center: Complex64::new(center_re, center_im), width, height: width * ny as f64 / nx as f64 },
            nx,
            ny,
            mode,
            map: self.map.spec(),
            max_iter: self.board.context().max_iter(),
            tol: DEFAULT_TOL,
        };
        Ok(render_with(&self.board, &job, None).map_err(js_err)?.rgba())
    }

    /// `[Re Φ, Im Φ, err, iterations]` at a point of the native plane, or
    /// an error naming why the point has no Fatou coordinate.
    pub fn fatou(&self, re: f64, im: f64) -> Result<Vec<f64>, JsError> {
        let v = self.board.fatou(Complex64::new(re, im)).map_err(js_err)?;
        Ok(vec![v.value.re, v.value.im, v.err_estimate, v.iterations as f64])
    }

    /// `[Re h, Im h]` for the horn map at `ζ`.
    pub fn horn(&self, re: f64, im: f64) -> Result<Vec<f64>, JsError> {
        let h = self.board.context().horn_eval(Complex64::new(re, im)).map_err(js_err)?;
        Ok(vec![h.re, h.im])
    }

    /// Iterative residue, `v′` and the critical value of the renormalization, as JSON.
    pub fn summary(&self) -> String {
        let ctx = self.board.context();
        let c = |z: Complex64| [z.re, z.im];
        let nu = ctx.critical_value();
        serde_json::to_string(&Summary {
            kind: self.map.kind().name().to_string(),
            germ_of: ctx.map().kind().name().to_string(),
            gamma: c(ctx.gamma()),
            v_prime: c(ctx.v_prime()),
            critical_value: c(nu),
            critical_modulus: nu.norm(),
        })
        .expect("summary serializes")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explorer_renders_rgba() {
        let e = Explorer::new(r#"{"kind":"quad"}"#, 2000).unwrap();
        let px = e.render("dynamical", -0.5, 0.0, 2.0, 8, 6).unwrap();
        assert_eq!(px.len(), 8 * 6 * 4);
        assert!(px.chunks(4).all(|p| p[3] == 255));
        let phi = e.fatou(-0.5, 0.0).unwrap();
        assert_eq!(phi.len(), 4);
        assert!(e.summary().contains("\"kind\":\"quad\""));
    }
}

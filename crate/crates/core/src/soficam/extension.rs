use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freealg::Word;
use crate::gf::Scalar;
use crate::rational::{frac, Rational};
use crate::repseq::Representation;
use crate::tiling::FiniteApproxMap;

/// Words visited by one extension check.
pub const MAX_EXTENSION_WORDS: usize = 1 << 16;

/// Coordinates of `theta(g_i)` and `theta(g_i^-1)` in the map's basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneratorImage {
    pub forward: Vec<Scalar>,
    pub inverse: Vec<Scalar>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExtensionReport {
    pub good_map: bool,
    pub words_checked: usize,
    /// largest `rank(phi(theta(w)) - rho(w)) / n`
    #[serde(with = "crate::rational::serde_repr")]
    pub max_distance: Rational,
    pub worst_word: String,
    pub close: bool,
}

impl ExtensionReport {
    pub fn all(&self) -> bool {
        self.good_map && self.close
    }
}

/// Product of coordinate vectors through the multiplication table.
fn table_mul(map: &FiniteApproxMap, u: &[Scalar], v: &[Scalar]) -> Result<Vec<Scalar>> {
    let f = map.field();
    let mut out = vec![Scalar::ZERO; map.basis_count()];
    for (a, &ua) in u.iter().enumerate() {
        if ua.is_zero() {
            continue;
        }
        for (b, &vb) in v.iter().enumerate() {
            if vb.is_zero() {
                continue;
            }
            let prod = map.product(a, b).ok_or(Error::MissingProduct(a + 1, b + 1))?;
            let c = f.mul(ua, vb);
            for (o, &p) in out.iter_mut().zip(prod) {
                *o = f.add(*o, f.mul(c, p));
            }
        }
    }
    Ok(out)
}

/// Checks that `phi` is `m`-good and `rank(phi(theta(w)) - rho(w)) / n <
/// delta` for every word of length at most `m`. Words span the elements
/// of length at most `m`, and `a -> phi(theta(a)) - rho(a)` is linear, so
/// words suffice for the maximum over a basis.
pub fn approx_extension_check(
    rho: &Representation,
    phi: &FiniteApproxMap,
    theta: &[GeneratorImage],
    m: usize,
    delta: Rational,
) -> Result<ExtensionReport> {
    if theta.len() != rho.r() as usize {
        return Err(Error::InvalidInput(format!(
            "{} generator images for r = {}",
            theta.len(),
            rho.r()
        )));
    }
    if rho.dim() != phi.dim() || rho.field() != phi.field() {
        return Err(Error::DimensionMismatch("representation and map act on different spaces".into()));
    }
    let r = rho.r();
    let count = if r == 0 {
        1
    } else {
        // 1 + 2r * sum_{l < m} (2r - 1)^l
        let mut total: usize = 1;
        let mut layer: usize = 2 * r as usize;
        for _ in 0..m {
            total = total.saturating_add(layer);
            layer = layer.saturating_mul(2 * r as usize - 1);
        }
        total
    };
    if count > MAX_EXTENSION_WORDS {
        return Err(Error::BudgetExceeded {
            needed: count as u128,
            cap: MAX_EXTENSION_WORDS as u128,
        });
    }
    let good_map = phi.is_good_map(m.max(1))?;
    let n = phi.dim();
    let mut unit = vec![Scalar::ZERO; phi.basis_count()];
    unit[0] = Scalar::ONE;
    let mut max_distance = Rational::from_integer(0);
    let mut worst_word = Word::identity().to_string();
    let words = Word::all_up_to(r, m);
    for w in &words {
        let mut coords = unit.clone();
        for l in w.letters() {
            let g = &theta[l.gen as usize - 1];
            let step = if l.inverse { &g.inverse } else { &g.forward };
            coords = table_mul(phi, &coords, step)?;
        }
        let diff = phi.phi(&coords)?.sub(&rho.apply_word(w)?)?;
        let d = frac(diff.rank(), n);
        if d > max_distance {
            max_distance = d;
            worst_word = w.to_string();
        }
    }
    Ok(ExtensionReport {
        good_map,
        words_checked: words.len(),
        max_distance,
        worst_word,
        close: max_distance < delta,
    })
}

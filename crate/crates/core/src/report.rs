//! Serializable report shapes for profiles and sheaf computations, plus the
//! builders that fill them from the computational types.  These are the
//! stable machine-readable interfaces; everything else is internal.

use serde::{Deserialize, Serialize};

use crate::field::{Field, FieldDesc};
use crate::fi::FiData;
use crate::graded::{GradedKernel, SplittingType};
use crate::nullcone::{JordanTypeProfile, PointP1, ProfilePoint};
use crate::sl2::Sl2Module;
use crate::theta::hp_to_string;

/// One non-generic point with its Jordan type and the field it lives in.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExceptionalEntry {
    /// Homogeneous coordinates [s, t]; extension points are [1, u] with u a
    /// root of the accompanying modulus.
    pub point: [String; 2],
    pub field: FieldDesc,
    #[serde(rename = "type")]
    pub jordan_type: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfileReport {
    pub generic: String,
    pub exceptional: Vec<ExceptionalEntry>,
}

pub fn profile_report<K: Field>(m: &Sl2Module<K>, profile: &JordanTypeProfile<K>) -> ProfileReport {
    let k = m.field();
    let base = k.describe();
    let exceptional = profile
        .exceptional
        .iter()
        .map(|(pt, ty)| {
            let (point, field) = match pt {
                ProfilePoint::Rational(PointP1::Finite(t)) => {
                    (["1".to_string(), k.fmt_el(t)], base.clone())
                }
                ProfilePoint::Rational(PointP1::Infinity) => {
                    (["0".to_string(), "1".to_string()], base.clone())
                }
                ProfilePoint::Extension { modulus } => {
                    // The point is [1 : u] in K[u]/(modulus); report the
                    // extension's field data with the full monic modulus, low
                    // degree first, matching Field::describe.
                    let deg = modulus.len() - 1;
                    let desc = FieldDesc {
                        p: base.p,
                        e: base.e * deg,
                        modulus: modulus.iter().map(|c| k.fmt_el(c)).collect(),
                    };
                    (["1".to_string(), "u".to_string()], desc)
                }
            };
            ExceptionalEntry {
                point,
                field,
                jordan_type: ty.to_exp_string(),
            }
        })
        .collect();
    ProfileReport {
        generic: profile.generic.to_exp_string(),
        exceptional,
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GeneratorEntry {
    pub degree: i64,
    /// One homogeneous polynomial per ambient coordinate.
    pub vector: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HilbertEntry {
    pub d: i64,
    pub dim: usize,
}

/// Report for one computed sheaf: a kernel/image/cokernel power or a
/// filtration layer F_i.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SheafReport {
    pub module: String,
    pub object: String,
    pub certified: bool,
    pub generators: Vec<GeneratorEntry>,
    /// Twists a_i of (+)_i O(a_i), weakly decreasing; absent when the degree
    /// window left the type undetermined.
    pub splitting: Option<Vec<i64>>,
    pub hilbert: Vec<HilbertEntry>,
}

/// Renders a kernel generator (component layout, blocks of length degree+1)
/// as one polynomial string per coordinate.
fn generator_entry<K: Field>(field: &K, cols: usize, degree: i64, v: &[K::El]) -> GeneratorEntry {
    let len = degree as usize + 1;
    let vector = (0..cols)
        .map(|j| hp_to_string(field, &v[j * len..(j + 1) * len].to_vec()))
        .collect();
    GeneratorEntry { degree, vector }
}

pub fn kernel_report<K: Field>(
    m: &Sl2Module<K>,
    power: usize,
    ker: &GradedKernel<K>,
    hilbert_to: i64,
) -> SheafReport {
    let k = m.field();
    let sub = ker.submodule(hilbert_to);
    SheafReport {
        module: m.label().describe(),
        object: format!("ker^{power}"),
        certified: true,
        generators: ker
            .generators
            .iter()
            .map(|(d, v)| generator_entry(k, ker.cols, *d, v))
            .collect(),
        splitting: Some(ker.splitting().twists().to_vec()),
        hilbert: sub
            .hilbert(0, hilbert_to)
            .into_iter()
            .map(|(d, dim)| HilbertEntry { d, dim })
            .collect(),
    }
}

pub fn fi_report<K: Field>(m: &Sl2Module<K>, data: &FiData) -> SheafReport {
    SheafReport {
        module: m.label().describe(),
        object: format!("F_{}", data.i),
        certified: data.splitting.is_some(),
        generators: Vec::new(),
        splitting: data
            .splitting
            .as_ref()
            .map(|st: &SplittingType| st.twists().to_vec()),
        hilbert: data
            .hilbert
            .iter()
            .map(|&(d, dim)| HilbertEntry { d, dim })
            .collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::Fp;
    use crate::fi::{default_degree_bound, fi_data};
    use crate::graded::graded_kernel;
    use crate::nullcone::jordan_profile;
    use crate::sl2::{phi, weyl};
    use crate::theta::build_theta;

    #[test]
    fn profile_report_roundtrips_through_json() {
        let k = Fp::new(5).unwrap();
        let m = phi(&k, 7, &crate::nullcone::PointP1::Finite(1)).unwrap();
        let profile = jordan_profile(&m, 4).unwrap();
        let rep = profile_report(&m, &profile);
        assert_eq!(rep.generic, "[5]");
        assert_eq!(rep.exceptional.len(), 1);
        assert_eq!(rep.exceptional[0].point, ["1".to_string(), "1".to_string()]);
        assert_eq!(rep.exceptional[0].jordan_type, "[3][2]");
        let js = serde_json::to_string(&rep).unwrap();
        assert!(js.contains("\"type\":\"[3][2]\""));
        let back: ProfileReport = serde_json::from_str(&js).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn kernel_report_shape() {
        let k = Fp::new(5).unwrap();
        let m = weyl(&k, 2);
        let ker = graded_kernel(&build_theta(&m), 10).unwrap();
        let rep = kernel_report(&m, 1, &ker, 8);
        assert_eq!(rep.object, "ker^1");
        assert!(rep.certified);
        assert_eq!(rep.splitting, Some(vec![-2]));
        assert_eq!(rep.generators.len(), 1);
        assert_eq!(
            rep.generators[0].vector,
            vec!["s^2".to_string(), "4st".to_string(), "t^2".to_string()]
        );
        let back: SheafReport =
            serde_json::from_str(&serde_json::to_string(&rep).unwrap()).unwrap();
        assert_eq!(back, rep);
    }

    #[test]
    fn fi_report_shape() {
        let k = Fp::new(5).unwrap();
        let m = weyl(&k, 2);
        let data = fi_data(&m, 3, default_degree_bound(&m)).unwrap();
        let rep = fi_report(&m, &data);
        assert_eq!(rep.object, "F_3");
        assert_eq!(rep.splitting, Some(vec![-2]));
    }
}

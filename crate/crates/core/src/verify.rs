//! Checks of the three worked ideal factorisations.

use crate::algebra::{field_product, is_associate, reduced_norm, AlgebraElement};
use crate::gaussian::GaussianInteger as Gi;
use crate::lattice::ZiLattice;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    fn new(name: &str, pass: bool, detail: String) -> Self {
        Self { name: name.to_string(), pass, detail }
    }
}

fn pair(a: (i64, i64), b: (i64, i64)) -> AlgebraElement {
    AlgebraElement::from_pair(Gi::new(a.0, a.1), Gi::new(b.0, b.1))
}

/// `1 + ie`.
pub fn example_one() -> AlgebraElement {
    pair((1, 0), (0, 1))
}

/// `1+2e, 2-e, -i+2ie, 1-2ie`: a factorisation of `17`.
pub fn example_two() -> Vec<AlgebraElement> {
    vec![pair((1, 0), (2, 0)), pair((2, 0), (-1, 0)), pair((0, -1), (0, 2)), pair((1, 0), (0, -2))]
}

/// `-2i+(i-2)e, 2i+(i-2)e, 1-2i-2e, 2-(i+2)e`: a factorisation of `73`.
pub fn example_three() -> Vec<AlgebraElement> {
    vec![pair((0, -2), (-2, 1)), pair((0, 2), (-2, 1)), pair((1, -2), (-2, 0)), pair((2, 0), (-2, -1))]
}

/// Largest index of `vec(Āφ_k) + vec(Āφ_l)` over distinct pairs; `1` means pairwise coprime.
pub fn max_pair_index(phis: &[AlgebraElement]) -> i128 {
    let lats: Vec<ZiLattice> = phis
        .iter()
        .map(|&p| ZiLattice::new(crate::algebra::rep_matrix(p)).expect("nonzero reduced norm"))
        .collect();
    let mut worst = 1;
    for k in 0..lats.len() {
        for l in k + 1..lats.len() {
            worst = worst.max(lats[k].sum_index(&lats[l]));
        }
    }
    worst
}

pub fn verify_examples() -> Vec<Check> {
    let mut out = Vec::new();

    let t = example_one();
    let t4 = field_product([t; 4]);
    out.push(Check::new("example1.fourth_power_associate_to_2", is_associate(t4, AlgebraElement::from_gi(Gi::new(2, 0))), format!("{:?}", t4.to_vec())));
    let n = reduced_norm(t);
    out.push(Check::new("example1.reduced_norm", n == Gi::new(1, 1), n.to_string()));

    let two = example_two();
    let expected = [Gi::new(1, -4), Gi::new(4, -1), Gi::new(-1, 4), Gi::new(1, 4)];
    let norms: Vec<Gi> = two.iter().map(|&p| reduced_norm(p)).collect();
    out.push(Check::new(
        "example2.reduced_norms",
        norms == expected,
        norms.iter().map(Gi::to_string).collect::<Vec<_>>().join(" "),
    ));
    let p = field_product(two.iter().copied());
    out.push(Check::new("example2.product_associate_to_17", is_associate(p, AlgebraElement::from_gi(Gi::new(17, 0))), format!("{:?}", p.to_vec())));
    let np = reduced_norm(p);
    out.push(Check::new("example2.product_reduced_norm", np == Gi::new(0, 289), np.to_string()));
    let idx = max_pair_index(&two);
    out.push(Check::new("example2.pairwise_coprime", idx == 1, format!("max_sum_index={idx}")));

    let three = example_three();
    let p = field_product(three.iter().copied());
    out.push(Check::new("example3.product_associate_to_73", is_associate(p, AlgebraElement::from_gi(Gi::new(73, 0))), format!("{:?}", p.to_vec())));
    let idx = max_pair_index(&three);
    out.push(Check::new("example3.pairwise_coprime", idx == 1, format!("max_sum_index={idx}")));
    out
}

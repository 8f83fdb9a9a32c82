//! Chinese-remainder partition of the golden lattice into per-message subcodes.
//!
//! For pairwise coprime generators `φ_1 … φ_K` of the form `α + βe`, put
//! `q = ∏ φ_k` and `q_k = ∏_{j≠k} φ_j`. Then `Λ_k = vec(Ā·q_k)` and
//! `Λ_s = vec(Ā·q)` satisfy `Λ_s ⊂ Λ_k ⊂ Z[i]⁴`, and
//! `Λ/Λ_s = Λ_1/Λ_s ⊕ … ⊕ Λ_K/Λ_s`.

use std::collections::HashMap;
use std::io::Write;

use crate::algebra::{field_product, rep_matrix, reduced_norm, reduced_norm_abs2, AlgebraElement};
use crate::error::{Error, Result};
use crate::gaussian::GaussianInteger as Gi;
use crate::lattice::{enumerate_cosets, CosetLeader, LeaderTable, ZiLattice};
use crate::zmat::IVec;

/// A validated partition together with its coset tables.
#[derive(Clone, Debug)]
pub struct PartitionSpec {
    phis: Vec<AlgebraElement>,
    q: AlgebraElement,
    qks: Vec<AlgebraElement>,
    sublattices: Vec<ZiLattice>,
    /// `vec(Ā·φ_k)`; the CRT split reads message `k` off the residue modulo this lattice.
    ideal_lattices: Vec<ZiLattice>,
    shaping: ZiLattice,
    leaders: Vec<Vec<CosetLeader>>,
    crt_lookup: Vec<HashMap<IVec, usize>>,
    full_table: LeaderTable,
}

impl PartitionSpec {
    pub fn build(phis: &[AlgebraElement]) -> Result<Self> {
        if phis.is_empty() {
            return Err(Error::EmptyPartition);
        }
        for (index, phi) in phis.iter().enumerate() {
            if !phi.is_theta_free() {
                return Err(Error::NotThetaFree { index });
            }
            if reduced_norm(*phi).is_zero() {
                return Err(Error::ZeroDivisor { index });
            }
        }
        let ideal_lattices: Vec<ZiLattice> = phis
            .iter()
            .map(|&p| ZiLattice::new(rep_matrix(p)).expect("nonzero reduced norm gives a full-rank lattice"))
            .collect();
        for k in 0..phis.len() {
            for l in k + 1..phis.len() {
                let index = ideal_lattices[k].sum_index(&ideal_lattices[l]);
                if index != 1 {
                    return Err(Error::NotCoprime { first: k, second: l, index });
                }
            }
        }

        let q = field_product(phis.iter().copied());
        let qks: Vec<AlgebraElement> = (0..phis.len())
            .map(|k| field_product(phis.iter().enumerate().filter(|&(j, _)| j != k).map(|(_, &p)| p)))
            .collect();
        let shaping = ZiLattice::new(rep_matrix(q)).expect("nonzero product");
        let sublattices: Vec<ZiLattice> = qks.iter().map(|&qk| ZiLattice::new(rep_matrix(qk)).expect("nonzero product")).collect();

        let leaders: Vec<Vec<CosetLeader>> = sublattices
            .iter()
            .map(|sub| enumerate_cosets(sub, &shaping))
            .collect::<Result<_>>()?;

        let mut crt_lookup = Vec::with_capacity(phis.len());
        for (k, table) in leaders.iter().enumerate() {
            let map: HashMap<IVec, usize> = table
                .iter()
                .enumerate()
                .map(|(w, l)| (ideal_lattices[k].residue_key(&l.real()), w))
                .collect();
            assert_eq!(map.len(), table.len(), "Λ_k/Λ_s must inject into Λ/vec(Āφ_k)");
            crt_lookup.push(map);
        }

        let full_table = LeaderTable::build(&shaping);
        Ok(Self { phis: phis.to_vec(), q, qks, sublattices, ideal_lattices, shaping, leaders, crt_lookup, full_table })
    }

    pub fn k(&self) -> usize {
        self.phis.len()
    }

    pub fn phis(&self) -> &[AlgebraElement] {
        &self.phis
    }

    pub fn q(&self) -> AlgebraElement {
        self.q
    }

    pub fn qks(&self) -> &[AlgebraElement] {
        &self.qks
    }

    pub fn sublattice(&self, k: usize) -> &ZiLattice {
        &self.sublattices[k]
    }

    pub fn shaping(&self) -> &ZiLattice {
        &self.shaping
    }

    /// Leaders of `Λ_k/Λ_s`; position in the table is the message value.
    pub fn leaders(&self, k: usize) -> &[CosetLeader] {
        &self.leaders[k]
    }

    /// `W_k`, the number of values of message `k`.
    pub fn sizes(&self) -> Vec<usize> {
        self.leaders.iter().map(Vec::len).collect()
    }

    /// `|N_rd(φ_k)|⁴`.
    pub fn expected_size(&self, k: usize) -> i64 {
        let n = reduced_norm_abs2(self.phis[k]);
        n * n
    }

    /// `|Λ/Λ_s|`.
    pub fn total_size(&self) -> usize {
        self.sizes().iter().product()
    }

    pub fn full_table(&self) -> &LeaderTable {
        &self.full_table
    }

    /// Minimum-energy representative of `x + Λ_s`, by table lookup.
    pub fn reduce(&self, x: &IVec) -> IVec {
        self.full_table.leader(&self.shaping, x)
    }

    /// `(Σ x_k) mod Λ_s`.
    pub fn superpose(&self, parts: &[CosetLeader]) -> CosetLeader {
        let mut sum = [0i64; 8];
        for p in parts {
            for (s, v) in sum.iter_mut().zip(p.real()) {
                *s += v;
            }
        }
        CosetLeader::from_real(&self.reduce(&sum))
    }

    /// Message values whose superposition reduces to `x`.
    pub fn crt_indices(&self, x: &CosetLeader) -> Vec<usize> {
        let r = x.real();
        self.crt_lookup
            .iter()
            .zip(&self.ideal_lattices)
            .map(|(map, lat)| map[&lat.residue_key(&r)])
            .collect()
    }

    /// Splits a leader of `Λ/Λ_s` into its unique components in `Λ_k/Λ_s`.
    pub fn crt_split(&self, x: &CosetLeader) -> Vec<CosetLeader> {
        self.crt_indices(x).into_iter().enumerate().map(|(k, w)| self.leaders[k][w]).collect()
    }

    /// The generators in the structured text form, one `phi = …` line each.
    pub fn to_text(&self) -> String {
        self.phis.iter().map(|p| format!("phi = {}\n", format_phi(p))).collect()
    }
}

pub fn build_partition(phis: &[AlgebraElement]) -> Result<PartitionSpec> {
    PartitionSpec::build(phis)
}

pub fn crt_split(x: &CosetLeader, spec: &PartitionSpec) -> Vec<CosetLeader> {
    spec.crt_split(x)
}

/// Four `re,im` pairs separated by spaces.
pub fn format_phi(p: &AlgebraElement) -> String {
    p.to_vec().iter().map(|z| format!("{},{}", z.re, z.im)).collect::<Vec<_>>().join(" ")
}

/// Writes leaders as CSV with eight integer columns.
pub fn write_leaders_csv<W: Write>(leaders: &[CosetLeader], out: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["a_re", "a_im", "b_re", "b_im", "c_re", "c_im", "d_re", "d_im"])?;
    for l in leaders {
        w.write_record(l.real().iter().map(i64::to_string))?;
    }
    w.flush()?;
    Ok(())
}

/// Generators used throughout: `1 + ie` alone, and `1 + 2e`, `2 - e` (the 17-partition).
pub mod presets {
    use super::*;

    pub fn one_plus_ie() -> Vec<AlgebraElement> {
        vec![AlgebraElement::from_pair(Gi::ONE, Gi::I)]
    }

    pub fn seventeen() -> Vec<AlgebraElement> {
        vec![
            AlgebraElement::from_pair(Gi::new(1, 0), Gi::new(2, 0)),
            AlgebraElement::from_pair(Gi::new(2, 0), Gi::new(-1, 0)),
        ]
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::HashSet;

    #[test]
    fn one_plus_ie_partition() {
        let spec = build_partition(&presets::one_plus_ie()).unwrap();
        assert_eq!(spec.k(), 1);
        assert_eq!(spec.sizes(), vec![4]);
        assert_eq!(spec.expected_size(0), 4);
        assert_eq!(spec.total_size(), 4);
        assert_eq!(spec.qks()[0], AlgebraElement::ONE);
        for l in spec.leaders(0) {
            assert_eq!(spec.crt_split(l), vec![*l]);
        }
    }

    #[test]
    fn rejects_theta_component() {
        let bad = AlgebraElement::from_vec([Gi::ONE, Gi::ONE, Gi::ZERO, Gi::ZERO]);
        assert!(matches!(build_partition(&[bad]), Err(Error::NotThetaFree { index: 0 })));
    }

    #[test]
    fn rejects_zero() {
        let phis = [presets::one_plus_ie()[0], AlgebraElement::ZERO];
        assert!(matches!(build_partition(&phis), Err(Error::ZeroDivisor { index: 1 })));
    }

    #[test]
    fn rejects_repeated_generator() {
        let p = presets::seventeen()[0];
        assert!(matches!(build_partition(&[p, p]), Err(Error::NotCoprime { first: 0, second: 1, .. })));
    }

    #[test]
    fn rejects_empty() {
        assert!(matches!(build_partition(&[]), Err(Error::EmptyPartition)));
    }

    #[test]
    fn seventeen_partition_sizes_and_crt() {
        let spec = build_partition(&presets::seventeen()).unwrap();
        assert_eq!(spec.sizes(), vec![289, 289]);
        assert_eq!(spec.total_size(), 83521);
        assert_eq!(spec.full_table().len(), 83521);
        for k in 0..2 {
            assert_eq!(spec.sublattice(k).index(), 289);
            assert!(spec.sublattice(k).contains_lattice(spec.shaping()));
            assert_eq!(spec.shaping().index() / spec.sublattice(k).index(), spec.expected_size(k) as i128);
            assert_eq!(spec.leaders(k)[0], CosetLeader::ZERO);
        }
        // every leader of Λ/Λ_s splits and recombines to itself
        let mut seen = HashSet::new();
        for l in spec.full_table().leaders() {
            let x = CosetLeader::from_real(l);
            let parts = spec.crt_split(&x);
            assert_eq!(spec.superpose(&parts), x);
            assert!(seen.insert(spec.crt_indices(&x)));
        }
        assert_eq!(seen.len(), 83521);
        assert_eq!(spec.crt_split(&CosetLeader::ZERO), vec![CosetLeader::ZERO; 2]);
    }

    #[test]
    fn text_round_trip_form() {
        let spec = build_partition(&presets::seventeen()).unwrap();
        assert_eq!(spec.to_text(), "phi = 1,0 0,0 2,0 0,0\nphi = 2,0 0,0 -1,0 0,0\n");
    }
}

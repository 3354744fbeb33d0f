use voa_coset_core::chars::{singlet_char, ModelParams};
use voa_coset_core::fock::*;
use voa_coset_core::num::{exponent, rat, Exponent, QuadNumber};
use voa_coset_core::Error;

/// q-coefficients of `ch M_{r,1}` relative to its leading exponent.
fn singlet_levels(r: i64, m: &ModelParams, max_level: i64) -> Vec<usize> {
    let lead = m.rs_exponent(r, 1) - exponent(1, 24);
    let s = singlet_char(r, 1, m, lead + max_level).unwrap();
    (0..=max_level)
        .map(|n| {
            let c = s.coeff(Exponent::from_integer(0), lead + n);
            c.to_integer().unwrap().try_into().unwrap()
        })
        .collect()
}

#[test]
fn basis_dimensions() {
    let b = build_basis(&QuadNumber::zero(), 8);
    assert_eq!(b.dim(0), 1);
    assert_eq!(b.dim(4), 5);
    assert_eq!(b.dim(8), 22);
    assert_eq!(b.max_level(), 8);
    let pn = voa_coset_core::num::partition_numbers(8);
    for (n, count) in pn.iter().enumerate().take(9) {
        assert_eq!(b.dim(n), usize::try_from(count).unwrap());
    }
}

#[test]
fn vacuum_screening_blocks() {
    let m = ModelParams::new(2).unwrap();
    let s = screening_matrix(&QuadNumber::zero(), &m, 3).unwrap();
    assert_eq!(s.level_offset, 1);
    assert_eq!(s.blocks[0].target_level, None);
    assert!(s.blocks[0].rows.is_empty());
    // Q₋ a₋₁|0⟩ = -α₋ |α₋⟩
    let b1 = &s.blocks[1];
    assert_eq!(b1.rows.len(), 1);
    assert_eq!(b1.rows[0], [-m.alpha_minus.clone()]);
    assert!(!b1.rows[0][0].is_zero());
}

#[test]
fn multivalued_screening_is_rejected() {
    let m = ModelParams::new(3).unwrap();
    let mu = m.alpha_plus.scale(&rat(1, 3));
    assert!(matches!(
        screening_matrix(&mu, &m, 2),
        Err(Error::Multivalued(_))
    ));
    assert!(screening_matrix(&m.alpha_rs(2, 1), &m, 2).is_ok());
    assert!(kernel_graded_dims(0, &m, 2).is_err());
}

#[test]
fn blocks_respect_the_weight_grading() {
    for p in 2..=4u32 {
        let m = ModelParams::new(p).unwrap();
        for r in 1..=3 {
            let mu = m.alpha_rs(r, 1);
            let s = screening_matrix(&mu, &m, 6).unwrap();
            // h_μ + N = h_{μ+α₋} + N'
            let shift = &m.weight(&s.target_weight) - &m.weight(&mu);
            assert_eq!(shift, QuadNumber::from_int(s.level_offset));
            assert_eq!(s.level_offset, r);
            for b in &s.blocks {
                match b.target_level {
                    Some(t) => {
                        assert_eq!(t as i64, b.source_level as i64 - r);
                        assert_eq!(
                            b.rows.len(),
                            voa_coset_core::fock::partitions(t as u32, t as u32).len()
                        );
                        assert!(b.rows.iter().all(|row| row.len()
                            == partitions(b.source_level as u32, b.source_level as u32).len()));
                    }
                    None => assert!((b.source_level as i64) < r),
                }
            }
        }
    }
}

#[test]
fn rank_plus_nullity_is_the_source_dimension() {
    let m = ModelParams::new(3).unwrap();
    let s = screening_matrix(&m.alpha_rs(1, 1), &m, 7).unwrap();
    let dims = kernel_graded_dims(1, &m, 7).unwrap();
    for (b, k) in s.blocks.iter().zip(&dims) {
        let src = partitions(b.source_level as u32, b.source_level as u32).len();
        assert_eq!(rank(&b.rows) + k, src);
        assert!(rank(&b.rows) <= b.rows.len());
    }
}

#[test]
fn kernels_reproduce_singlet_characters() {
    for p in [2u32, 3] {
        let m = ModelParams::new(p).unwrap();
        for r in [1, 2] {
            let dims = kernel_graded_dims(r, &m, 8).unwrap();
            assert_eq!(dims, singlet_levels(r, &m, 8), "p = {p}, r = {r}");
            assert_eq!(dims[0], 1);
        }
    }
}

#[test]
fn alpha_21_at_p2_up_to_level_6() {
    let m = ModelParams::new(2).unwrap();
    let mu = m.alpha_plus.scale(&rat(-1, 2));
    assert_eq!(mu, m.alpha_rs(2, 1));
    let s = screening_matrix(&mu, &m, 6).unwrap();
    let dims: Vec<usize> = s
        .blocks
        .iter()
        .map(|b| partitions(b.source_level as u32, b.source_level as u32).len() - rank(&b.rows))
        .collect();
    assert_eq!(dims, singlet_levels(2, &m, 6));
}

#[test]
fn larger_p_still_matches() {
    let m = ModelParams::new(5).unwrap();
    for r in [1, 3] {
        assert_eq!(
            kernel_graded_dims(r, &m, 6).unwrap(),
            singlet_levels(r, &m, 6)
        );
    }
}

//! Frozen values for small hand-checkable instances, through the public API.

use heisenbrick::brick::DEFAULT_FIBER_CAP;
use heisenbrick::convolution::cyclic_convolve;
use heisenbrick::dft::dft_indicator;
use heisenbrick::element_set::DEFAULT_BRUTE_CAP;
use heisenbrick::residue_set::product_count_table;
use heisenbrick::structure::{
    brute_stabilizer, choose_popular_shift, count_center_cosets, prop2_construct, structured_period, th1_certificate,
};
use heisenbrick::sumprod::covers_field;
use heisenbrick::*;

fn field(p: u32) -> PrimeField {
    PrimeField::new(p).unwrap()
}

fn set(f: &PrimeField, items: &[u32]) -> ResidueSet {
    ResidueSet::from_residues(f, items.iter().copied()).unwrap()
}

#[test]
fn residue_set_examples() {
    let f5 = field(5);
    assert_eq!(set(&f5, &[1, 2]).sumset(&set(&f5, &[2, 3])).unwrap().to_vec(), vec![0, 3, 4]);
    assert!(ResidueSet::empty(&f5).sumset(&set(&f5, &[1])).unwrap().is_empty());
    assert_eq!(set(&f5, &[1, 3]).dilate(2).unwrap().to_vec(), vec![1, 2]);
    assert!(set(&f5, &[1]).dilate(0).is_err());
    assert_eq!(ResidueSet::units(&f5).dilate(3).unwrap(), ResidueSet::units(&f5));

    let table = product_count_table(&set(&f5, &[1, 2]), &set(&f5, &[1, 3])).unwrap();
    assert_eq!(table, vec![0, 2, 1, 1, 0]);
    assert!(product_count_table(&set(&f5, &[0, 1]), &set(&f5, &[1])).is_err());
}

#[test]
fn spectrum_examples() {
    let f5 = field(5);
    let s = dft_indicator::<f64>(&set(&f5, &[1, 2]));
    assert!((s.values()[0].re - 2.0).abs() < 1e-12);
    assert!((s.energy() - 10.0).abs() < 1e-9);

    let delta = dft_indicator::<f64>(&set(&f5, &[0]));
    assert!(delta.values().iter().all(|v| (v.re - 1.0).abs() < 1e-12 && v.im.abs() < 1e-12));

    let full = dft_indicator::<f32>(&ResidueSet::full(&f5));
    assert!((full.values()[0].re - 5.0).abs() < 1e-5);
    assert!(full.values()[1..].iter().all(|v| v.norm() < 1e-4));
}

#[test]
fn convolution_examples() {
    let f5 = field(5);
    let c = cyclic_convolve(&set(&f5, &[1, 2]).indicator(), &set(&f5, &[2, 3]).indicator()).unwrap();
    assert_eq!(c, vec![1, 0, 0, 1, 2]);
    assert!(cyclic_convolve(&[u128::MAX, 0, 0], &[2, 0, 0]).is_err());
}

#[test]
fn heisenberg_examples() {
    let g = HeisenbergGroup::new(&field(5), 1).unwrap();
    let a = g.element(vec![1], vec![2], 3).unwrap();
    let b = g.element(vec![2], vec![1], 4).unwrap();
    assert_eq!(g.mul(&a, &b).unwrap(), HeisElement::new(vec![3], vec![3], 3));
    assert_eq!(g.inv(&a).unwrap(), HeisElement::new(vec![4], vec![3], 4));
    let x = g.element(vec![1], vec![0], 0).unwrap();
    let y = g.element(vec![0], vec![1], 0).unwrap();
    assert_eq!(g.commutator(&x, &y).unwrap(), HeisElement::new(vec![0], vec![0], 1));
    assert!(g.element(vec![5], vec![0], 0).is_err());
    assert!(g.element(vec![1, 1], vec![0], 0).is_err());
}

#[test]
fn coordinate_subgroup_examples() {
    assert_eq!(CoordinateSubgroup::center(2).order(5), 5);
    assert_eq!(CoordinateSubgroup::full(2).order(5), 3125);
    assert!(CoordinateSubgroup::try_new(vec![true], vec![true], false).is_err());
    assert!(CoordinateSubgroup::try_new(vec![true, false], vec![false, true], false).is_ok());
}

#[test]
fn element_set_examples() {
    let g = HeisenbergGroup::new(&field(3), 1).unwrap();
    let full = ElementSet::full_group(&g, DEFAULT_BRUTE_CAP).unwrap();
    assert_eq!(full.product(&full).unwrap().len(), 27);
    let e = ElementSet::from_elements(&g, DEFAULT_BRUTE_CAP, [&g.identity()]).unwrap();
    assert_eq!(e.right_stabilizer().unwrap().len(), 1);
    assert!(ElementSet::empty(&g, 26).is_err());
}

#[test]
fn brick_examples() {
    let f13 = field(13);
    let b = Brick::new(vec![set(&f13, &[1, 2])], vec![set(&f13, &[1, 2])], set(&f13, &[0, 1, 2])).unwrap();
    assert_eq!(b.cardinality(), 12u32.into());
    assert!(Brick::new(vec![set(&f13, &[0, 1])], vec![set(&f13, &[1])], set(&f13, &[0])).is_err());

    let single = Brick::new(vec![set(&f13, &[1])], vec![set(&f13, &[1])], set(&f13, &[0])).unwrap();
    let sq = single.square(DEFAULT_FIBER_CAP).unwrap();
    assert_eq!(sq.support_len(), 1);
    assert_eq!(sq.fiber(&[2], &[2]).unwrap().to_vec(), vec![1]);

    assert_eq!(prop2_construct(13, 1).unwrap().cardinality(), 36u32.into());
    assert!(b.square(3).is_err());
}

#[test]
fn popular_shift_examples() {
    let f5 = field(5);
    let s = choose_popular_shift(&set(&f5, &[1, 2])).unwrap();
    assert_eq!((s.shift, s.tilde.to_vec()), (3, vec![1, 2]));
    let s = choose_popular_shift(&set(&f5, &[4])).unwrap();
    assert_eq!((s.shift, s.tilde.to_vec()), (3, vec![4]));
    assert_eq!(choose_popular_shift(&ResidueSet::full(&f5)).unwrap().shift, 0);
}

#[test]
fn certificate_examples() {
    let f11 = field(11);
    let u = ResidueSet::units(&f11);
    let b = Brick::new(vec![u.clone()], vec![u], set(&f11, &[0, 1, 2, 3, 4])).unwrap();
    let cert = th1_certificate(&b).unwrap();
    assert!(cert.condition_holds);
    assert_eq!(cert.fiber_full, Some(true));

    let f5 = field(5);
    let small = Brick::new(vec![set(&f5, &[1, 2])], vec![set(&f5, &[1, 2])], set(&f5, &[0])).unwrap();
    let cert = th1_certificate(&small).unwrap();
    assert!(!cert.condition_holds);
    assert_eq!(cert.condition_lhs, "4");
    assert_eq!(cert.witness, None);
}

#[test]
fn period_and_coset_examples() {
    let prop4 = prop2_construct(13, 1).unwrap();
    let sq = prop4.square(DEFAULT_FIBER_CAP).unwrap();
    assert_eq!(count_center_cosets(&sq, &prop4).unwrap().center_coset_count, 0);
    assert!(structured_period(&sq).unwrap().period.is_trivial());
    let stab = brute_stabilizer(&sq.to_element_set(DEFAULT_BRUTE_CAP).unwrap()).unwrap();
    assert_eq!(stab.len(), 1);

    let f7 = field(7);
    let big_z = Brick::new(vec![set(&f7, &[1, 3])], vec![set(&f7, &[2])], set(&f7, &[0, 1, 2, 3])).unwrap();
    let sq = big_z.square(DEFAULT_FIBER_CAP).unwrap();
    let period = structured_period(&sq).unwrap();
    assert!(period.period.m());
    let cosets = count_center_cosets(&sq, &big_z).unwrap();
    assert_eq!(cosets.center_coset_count, sq.support_len());
}

#[test]
fn sumprod_examples() {
    let f11 = field(11);
    let u = ResidueSet::units(&f11);
    let inst = SumProdInstance::new(2, vec![u.clone()], vec![u.clone()], set(&f11, &[0, 1, 2, 3])).unwrap();
    assert_eq!(inst.condition_lhs(), 1600u32.into());
    assert!(covers_field(&inst).unwrap().covered);
    assert!(inst.exact_counts().unwrap().iter().all(|&c| c > 0));

    let full_z = SumProdInstance::new(1, vec![set(&f11, &[3])], vec![set(&f11, &[5])], ResidueSet::full(&f11)).unwrap();
    assert!(covers_field(&full_z).unwrap().covered);
    assert!(SumProdInstance::new(2, vec![set(&f11, &[0])], vec![u], set(&f11, &[0])).is_err());
}

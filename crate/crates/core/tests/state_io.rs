use sicsep::states::{
    isotropic, load_state, random_density, save_state, save_state_labeled, state_from_json,
    state_to_json,
};
use sicsep::{DensityMatrix, DensityMatrix32, Error};

#[test]
fn save_and_load_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    for (k, dims) in [vec![2, 2], vec![2, 3], vec![2, 2, 2]]
        .into_iter()
        .enumerate()
    {
        let rho: DensityMatrix = random_density(&dims, 3, k as u64).unwrap();
        let path = dir.path().join(format!("s{k}.json"));
        save_state(&rho, &path).unwrap();
        let back: DensityMatrix = load_state(&path).unwrap();
        assert_eq!(back.dims(), rho.dims());
        assert!(back.matrix().max_abs_diff(rho.matrix()) <= 1e-14);
    }
}

#[test]
fn labels_survive() {
    let rho: DensityMatrix = isotropic(3, 0.5).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("iso.json");
    save_state_labeled(&rho, "iso", &path).unwrap();
    let text = std::fs::read_to_string(&path).unwrap();
    let (_, label) = state_from_json::<f64>(&text).unwrap();
    assert_eq!(label.as_deref(), Some("iso"));
}

#[test]
fn single_precision_states_load() {
    let rho: DensityMatrix = random_density(&[2, 2], 2, 3).unwrap();
    let text = state_to_json(&rho, None);
    let (small, _) = state_from_json::<f32>(&text).unwrap();
    let small: DensityMatrix32 = small;
    assert!((small.purity() as f64 - rho.purity()).abs() < 1e-5);
}

#[test]
fn malformed_files_are_rejected() {
    assert!(matches!(state_from_json::<f64>("{"), Err(Error::Parse(_))));
    let bad_dims = r#"{"dims":[2,3],"matrix":[[0.25,0],[0,0],[0,0],[0.25,0]]}"#;
    assert!(matches!(
        state_from_json::<f64>(bad_dims),
        Err(Error::Shape(_))
    ));
    let not_psd = r#"{"dims":[2],"matrix":[[1.5,0],[0,0],[0,0],[-0.5,0]]}"#;
    assert!(matches!(
        state_from_json::<f64>(not_psd),
        Err(Error::NotPositive { .. })
    ));
}

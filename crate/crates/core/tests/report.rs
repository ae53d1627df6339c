use ncjoint::lumen::LumenPath;
use ncjoint::report::generate;
use ncjoint::specfile::SpecFile;

#[test]
fn seed_touches_only_the_randomized_artifacts() {
    let spec = SpecFile::default();
    let path = LumenPath::demo_bronchus();
    let a = generate(&spec, &path, 7).unwrap();
    let b = generate(&spec, &path, 8).unwrap();
    let names: Vec<_> = a.iter().map(|x| x.name).collect();
    assert_eq!(
        names,
        [
            "profile.svg",
            "profile.csv",
            "critical_n.txt",
            "interference.csv",
            "workspace.csv",
            "audit.csv",
            "tendon.csv",
            "footprint.txt",
            "schedule.csv",
            "coverage.txt",
            "trace.csv",
            "summary.txt",
        ]
    );
    let seeded = ["audit.csv", "footprint.txt", "coverage.txt", "summary.txt"];
    for (x, y) in a.iter().zip(&b) {
        assert_eq!(x.bytes == y.bytes, !seeded.contains(&x.name), "{}", x.name);
    }
}

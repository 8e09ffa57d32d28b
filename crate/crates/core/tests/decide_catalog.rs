use hopfkit::catalog::{build_named, catalog_families, Family};
use hopfkit::companion::{decide_ai, verify_companion, AIVerdict};

#[test]
fn catalog_verdicts() {
    for fam in catalog_families() {
        let h = build_named(fam).unwrap();
        let t = std::time::Instant::now();
        let v = decide_ai(&h).unwrap();
        eprintln!("{fam}: {} {:?}", v.tag(), t.elapsed());
        let expect_not = matches!(fam, Family::A2C4 | Family::A1);
        match &v {
            AIVerdict::Witness { sigma, .. } => {
                assert!(!expect_not, "{fam}");
                let hc = hopfkit::companion::with_companion_field(&h).unwrap();
                assert!(verify_companion(&hc, sigma).unwrap().passed(), "{fam}");
            }
            AIVerdict::NotAI { certificate, .. } => {
                assert!(expect_not, "{fam}: {certificate:?}");
                for b in certificate {
                    eprintln!("   {b:?}");
                }
            }
            AIVerdict::Inconclusive { reason, .. } => panic!("{fam}: {reason}"),
        }
    }
}

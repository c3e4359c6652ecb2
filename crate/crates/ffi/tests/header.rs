use std::path::PathBuf;
use std::process::Command;

const EXPORTS: &[&str] = &[
    "pflab_last_error",
    "pflab_spec_parse",
    "pflab_spec_free",
    "pflab_spec_shape",
    "pflab_set_state_budget",
    "pflab_pfl_dim",
    "pflab_det_regret",
    "pflab_pms_dim",
    "pflab_rand_regret",
    "pflab_play",
    "pflab_check_count",
    "pflab_run_check",
];

fn header() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("include/pflab.h")
}

#[test]
fn header_declares_every_export() {
    let text = std::fs::read_to_string(header()).unwrap();
    for name in EXPORTS {
        assert!(
            text.contains(&format!("{name}(")),
            "{name} missing from header"
        );
    }
    assert!(text.contains("typedef struct PflabSpec PflabSpec;"));
    assert!(text.contains("PFLAB_STATUS_BUDGET_EXCEEDED = 5"));
}

#[test]
fn header_compiles_as_c() {
    let dir = std::env::temp_dir().join(format!("pflab-header-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let src = dir.join("use.c");
    std::fs::write(
        &src,
        "#include \"pflab.h\"\n\
         int use(const char *t) {\n\
           PflabSpec *h = 0; unsigned v = 0;\n\
           if (pflab_spec_parse(t, &h) != PFLAB_STATUS_OK) return -1;\n\
           PflabStatus s = pflab_pfl_dim(h, 2, &v);\n\
           pflab_spec_free(h);\n\
           return s == PFLAB_STATUS_OK ? (int)v : -1;\n\
         }\n",
    )
    .unwrap();
    let Ok(out) = Command::new("cc")
        .args(["-std=c99", "-Wall", "-Werror", "-fsyntax-only", "-I"])
        .arg(header().parent().unwrap())
        .arg(&src)
        .output()
    else {
        eprintln!("no C compiler found, skipping");
        return;
    };
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
}

mod lambda_lengths {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/lambda_lengths.rs"));
}

#[test]
fn lambda_lengths_runs() {
    lambda_lengths::run_example().expect("lambda_lengths example should run");
}

mod holonomy {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/holonomy.rs"));
}

#[test]
fn holonomy_runs() {
    holonomy::run_example().expect("holonomy example should run");
}

mod closed_form {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/closed_form.rs"));
}

#[test]
fn closed_form_runs() {
    closed_form::run_example().expect("closed_form example should run");
}

mod double_dimers {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/double_dimers.rs"));
}

#[test]
fn double_dimers_runs() {
    double_dimers::run_example().expect("double_dimers example should run");
}

mod super_fibonacci {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/super_fibonacci.rs"));
}

#[test]
fn super_fibonacci_runs() {
    super_fibonacci::run_example().expect("super_fibonacci example should run");
}

mod light_cone {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/light_cone.rs"));
}

#[test]
fn light_cone_runs() {
    light_cone::run_example().expect("light_cone example should run");
}

mod osp_words {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/osp_words.rs"));
}

#[test]
fn osp_words_runs() {
    osp_words::run_example().expect("osp_words example should run");
}

mod superalgebra {
    include!(concat!(env!("CARGO_MANIFEST_DIR"), "/examples/superalgebra.rs"));
}

#[test]
fn superalgebra_runs() {
    superalgebra::run_example().expect("superalgebra example should run");
}

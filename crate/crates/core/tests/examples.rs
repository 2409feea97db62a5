//! Every runnable example must run to completion.

macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!("../examples/", stringify!($name), ".rs"));
            #[test]
            fn runs() {
                main();
            }
        }
    };
}

example!(h1_walkthrough);
example!(build_hierarchy);
example!(pairwise);
example!(extended_criteria);
example!(sensitivity_sweep);
example!(synthetic_scale);
example!(serve);

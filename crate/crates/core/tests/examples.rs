macro_rules! example {
    ($name:ident) => {
        mod $name {
            include!(concat!(
                env!("CARGO_MANIFEST_DIR"),
                "/examples/",
                stringify!($name),
                ".rs"
            ));
        }

        #[test]
        fn $name() {
            $name::run_example().expect(concat!(stringify!($name), " example should run"));
        }
    };
}

example!(mach_zehnder);
example!(two_by_two_array);
example!(theta_sweep);
example!(large_array);
example!(random_transmissions);
example!(superposition_inputs);
example!(non_square);
example!(dense_oracle);

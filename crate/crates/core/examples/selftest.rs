//! Run the acceptance sweep from code.

fn main() {
    let outcomes = zolotarev::selftest::run_all();
    for o in &outcomes {
        println!("{o}");
    }
    let failed = outcomes.iter().filter(|o| !o.passed).count();
    std::process::exit(if failed == 0 { 0 } else { 1 });
}

use arrkit::corpus::{verify_all, Status};
use std::time::Instant;

#[test]
fn run_shallow() {
    let t0 = Instant::now();
    let checks = verify_all(false).unwrap();
    let mut npass = 0;
    for c in &checks {
        if c.status == Status::Pass {
            npass += 1;
        } else {
            println!("{:11} {:20} {:12} {}", c.arrangement, c.check, c.status, c.detail);
        }
    }
    println!("{} checks, {} pass, elapsed {:?}", checks.len(), npass, t0.elapsed());
}

use std::time::Instant;
use flowmon::expr::parse;
use flowmon::poly::Basis;
use flowmon::sieve::*;
use flowmon::evolution::QuantityDerivatives;

fn main() {
    let v = "-(l1+l2)^2/(l1^2*l2^2)";
    let mut sp = SearchSpace::new(parse(v, Basis::Lambda).unwrap());
    sp.max_degree = 5;
    sp.seed = 42;
    let t0 = Instant::now();
    let cands = enumerate_candidates(&sp);
    println!("enumerate: {:?} ({} candidates)", t0.elapsed(), cands.len());
    let ctx = VelocityContext::new(&sp.velocity).unwrap();
    // full pipeline with per-candidate timing buckets
    let t1 = Instant::now();
    let mut reports = Vec::new();
    for (i, w) in cands.iter().enumerate() {
        reports.push(filter_candidate(&ctx, w, &sp, i as u64));
    }
    println!("filter total: {:?}", t1.elapsed());
    // top 10 slowest candidates
    let mut idx: Vec<usize> = (0..reports.len()).collect();
    idx.sort_by_key(|&i| std::cmp::Reverse(reports[i].timing));
    for &i in idx.iter().take(10) {
        let stage = match &reports[i].outcome {
            Outcome::Verified{..} => "verified".to_string(),
            Outcome::Rejected{stage,..} => format!("rej {}", stage.as_str()),
        };
        println!("  {:?}  {}  {}", reports[i].timing, stage, reports[i].candidate);
    }
    // total time by outcome bucket
    let mut buckets: std::collections::BTreeMap<String, (u32, f64)> = Default::default();
    for r in &reports {
        let key = match &r.outcome {
            Outcome::Verified{..} => "verified".to_string(),
            Outcome::Rejected{stage,..} => format!("rej {}", stage.as_str()),
        };
        let e = buckets.entry(key).or_insert((0, 0.0));
        e.0 += 1; e.1 += r.timing.as_secs_f64();
    }
    for (k, (n, s)) in buckets { println!("bucket {k}: n={n} total={s:.2}s"); }
    // time QuantityDerivatives alone on stage-3 survivors
    let t2 = Instant::now();
    let mut n = 0;
    for w in cands.iter() {
        if QuantityDerivatives::new(w).is_ok() { n += 1; }
        if n >= 200 { break; }
    }
    println!("200 QuantityDerivatives: {:?}", t2.elapsed());
}

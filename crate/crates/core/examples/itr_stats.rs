//! Information transfer rate across accuracies, chance-corrected kappa and
//! a paired t-test between two sets of fold accuracies.

use isbci::eval::{bits_per_minute, info_per_trial, itr, kappa, paired_ttest_2tailed, ItrInput};

fn main() -> isbci::Result<()> {
    println!("classes  accuracy  bits/decision  b/min (2 s per decision)");
    for k in [2, 3] {
        for acc in [0.5, 0.6, 0.7, 0.8, 0.9, 0.95, 1.0] {
            let bits = info_per_trial(&ItrInput::new(k, acc, 2.0)?);
            let bpm = bits_per_minute(itr(bits, 2.0)?);
            println!("{k:>7}  {acc:>8.2}  {bits:>13.4}  {bpm:>5.1}");
        }
    }
    println!("kappa of 0.785 with two classes: {:.3}", kappa(0.785, 2));

    let ours = [0.82, 0.79, 0.85, 0.77, 0.81, 0.84, 0.80, 0.78, 0.83, 0.86];
    let baseline = [0.74, 0.78, 0.80, 0.70, 0.77, 0.79, 0.75, 0.76, 0.78, 0.80];
    let t = paired_ttest_2tailed(&ours, &baseline)?;
    println!("paired t-test: t = {:.3}, df = {}, p = {:.5}", t.t, t.df, t.p);
    Ok(())
}

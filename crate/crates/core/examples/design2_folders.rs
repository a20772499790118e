//! Design 2: open a file in the sample home folder with keyboard actions,
//! then undo the walk back to the start.

use isbci::fsm::{d2_step, Design2Context, DirTree, FsmEvent};

const S: FsmEvent = FsmEvent::DecodedShort;
const L: FsmEvent = FsmEvent::DecodedLong;

fn main() -> isbci::Result<()> {
    let mut ctx = Design2Context::new(DirTree::sample())?;
    let drive = |ctx: &mut Design2Context, label: &str, evs: &[FsmEvent]| -> isbci::Result<()> {
        for &e in evs {
            let (next, actions) = d2_step(ctx, e)?;
            *ctx = next;
            for a in actions {
                println!("{label:<14} {a:?} -> /{}", ctx.selected_path().join("/"));
            }
        }
        Ok(())
    };

    drive(&mut ctx, "right", &[S, L, S])?;
    drive(&mut ctx, "enter", &[S, S])?;
    drive(&mut ctx, "down", &[S, L, L])?;
    drive(&mut ctx, "open", &[S, S])?;
    println!("history holds {} moves", ctx.history.len());
    while !ctx.history.is_empty() {
        drive(&mut ctx, "undo", &[L, S])?;
    }
    drive(&mut ctx, "undo", &[L, S])?;
    Ok(())
}

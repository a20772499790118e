//! Design 1: crop the screen rectangle by halves until it sits inside a
//! target cell, then double-click its centre.

use isbci::fsm::{d1_step, split_rect, D1Action, Design1Context, FsmEvent, Rect, WordSets};

fn main() -> isbci::Result<()> {
    let screen = Rect::screen(1024, 768);
    let target = Rect::new(640, 432, 64, 48);
    let (tx, ty) = target.center();
    let mut ctx = Design1Context::new(screen, WordSets::default(), 1)?;
    let mut decisions = 0;

    let mut step = |ctx: &mut Design1Context, ev: FsmEvent| -> isbci::Result<Vec<D1Action>> {
        let (next, actions) = d1_step(ctx, ev)?;
        *ctx = next;
        decisions += 1;
        Ok(actions)
    };

    while !target.contains(&ctx.current) {
        println!("prompt: short = {:?}, long = {:?}", ctx.prompt.short, ctx.prompt.long);
        step(&mut ctx, FsmEvent::DecodedShort)?;
        let (first, _) = split_rect(&ctx.current)?;
        let ev = if first.contains_point(tx, ty) {
            FsmEvent::DecodedShort
        } else {
            FsmEvent::DecodedLong
        };
        for a in step(&mut ctx, ev)? {
            println!("  {a:?}");
        }
    }
    step(&mut ctx, FsmEvent::DecodedLong)?;
    for a in step(&mut ctx, FsmEvent::DecodedShort)? {
        println!("  {a:?}");
    }
    println!("reached {target:?} in {decisions} decisions");
    Ok(())
}

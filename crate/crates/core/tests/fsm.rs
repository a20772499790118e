use proptest::prelude::*;
use serde_json::json;

use isbci::fsm::*;
use isbci::Error;

const S: FsmEvent = FsmEvent::DecodedShort;
const L: FsmEvent = FsmEvent::DecodedLong;

fn screen() -> Rect {
    Rect::screen(1024, 768)
}

fn d1() -> Design1Context {
    Design1Context::new(screen(), WordSets::default(), 0).unwrap()
}

fn d2() -> Design2Context {
    Design2Context::new(DirTree::sample()).unwrap()
}

fn run_d1(mut c: Design1Context, evs: &[FsmEvent]) -> (Design1Context, Vec<D1Action>) {
    let mut out = Vec::new();
    for &e in evs {
        let (n, a) = d1_step(&c, e).unwrap();
        c = n;
        out.extend(a);
    }
    (c, out)
}

fn run_d2(mut c: Design2Context, evs: &[FsmEvent]) -> (Design2Context, Vec<KeyAction>) {
    let mut out = Vec::new();
    for &e in evs {
        let (n, a) = d2_step(&c, e).unwrap();
        c = n;
        out.extend(a);
    }
    (c, out)
}

#[test]
fn pointer_trace_crop_restore_click() {
    let (c, a) = run_d1(d1(), &[S, L, S, S]);
    assert_eq!(
        a,
        vec![
            D1Action::CropApplied { kept: Rect::new(512, 0, 512, 768) },
            D1Action::CropApplied { kept: Rect::new(512, 0, 512, 384) },
        ]
    );
    assert_eq!(c.previous.len(), 2);
    let (c, a) = run_d1(c, &[L, L]);
    assert_eq!(a, vec![D1Action::RectRestored { rect: Rect::new(512, 0, 512, 768) }]);
    assert_eq!(c.state, D1State::CropRectangle);
    let (c, _) = run_d1(c, &[S]);
    assert_eq!(c.current, Rect::new(512, 0, 512, 384));
    let (c, a) = run_d1(c, &[L, S]);
    assert_eq!(a, vec![D1Action::DoubleClick { x: 767, y: 191 }]);
    assert_eq!((c.current, c.previous.len(), c.state), (screen(), 0, D1State::CropOrSwitch));
}

#[test]
fn restore_on_full_screen_keeps_screen() {
    let (c, a) = run_d1(d1(), &[L, L]);
    assert_eq!(a, vec![D1Action::RectRestored { rect: screen() }]);
    assert_eq!(c.current, screen());
}

#[test]
fn folder_trace_enter_right_undo() {
    let (c, a) = run_d2(d2(), &[S, L, S, S, S]);
    assert_eq!(a, vec![KeyAction::RightArrow, KeyAction::Enter]);
    assert_eq!(c.selected_path(), vec!["Documents", "letters"]);
    let (c, a) = run_d2(c, &[S, L, L]);
    assert_eq!(a, vec![KeyAction::DownArrow]);
    assert_eq!(c.selected_path(), vec!["Documents", "thesis.tex"]);
    let (c, a) = run_d2(c, &[L, S, L, S, L, S]);
    assert_eq!(a, vec![KeyAction::UpArrow, KeyAction::LevelUp, KeyAction::LeftArrow]);
    assert_eq!(c.cursor, vec![0]);
    assert!(c.history.is_empty());
    let (_, a) = run_d2(c, &[L, S]);
    assert_eq!(a, vec![KeyAction::UndoUnavailable]);
}

#[test]
fn folder_open_and_edges() {
    let (c, _) = run_d2(d2(), &[S, L, S, S, S]);
    let (c, a) = run_d2(c, &[S, S]);
    assert_eq!(a, vec![KeyAction::Enter]);
    assert_eq!(c.selected_path(), vec!["Documents", "letters", "bank.pdf"]);
    let before = c.history.len();
    let (c, a) = run_d2(c, &[S, S]);
    assert_eq!(
        a,
        vec![KeyAction::OpenFile {
            path: vec!["Documents".into(), "letters".into(), "bank.pdf".into()]
        }]
    );
    assert_eq!(c.history.len(), before);
    let (_, a) = run_d2(c, &[S, L, L]);
    assert_eq!(a, vec![KeyAction::BlockedEdge]);
    let (_, a) = run_d2(d2(), &[L, L]);
    assert_eq!(a, vec![KeyAction::BlockedEdge]);
}

#[test]
fn epsilon_events_are_errors() {
    assert!(matches!(d1_step(&d1(), FsmEvent::Epsilon), Err(Error::Protocol(_))));
    assert!(matches!(d2_step(&d2(), FsmEvent::Epsilon), Err(Error::Protocol(_))));
}

#[test]
fn action_wire_shapes() {
    let click = FsmAction::Pointer(D1Action::DoubleClick { x: 3, y: 4 });
    assert_eq!(serde_json::to_value(&click).unwrap(), json!({"action": "double_click", "x": 3, "y": 4}));
    let kept = FsmAction::Pointer(D1Action::CropApplied { kept: Rect::new(0, 0, 2, 1) });
    assert_eq!(
        serde_json::to_value(&kept).unwrap(),
        json!({"action": "crop_applied", "kept": {"x": 0, "y": 0, "w": 2, "h": 1}})
    );
    let key = FsmAction::Key(KeyAction::RightArrow);
    assert_eq!(serde_json::to_value(&key).unwrap(), json!({"action": "right_arrow"}));
    for a in [click, kept, key, FsmAction::Key(KeyAction::OpenFile { path: vec!["a".into()] })] {
        let back: FsmAction = serde_json::from_value(serde_json::to_value(&a).unwrap()).unwrap();
        assert_eq!(back, a);
    }
}

#[test]
fn context_dispatch_and_state_names() {
    let ctx = FsmContext::Design1(d1());
    assert_eq!(ctx.state_name(), "crop_or_switch");
    let (ctx, _) = ctx.step(L).unwrap();
    assert_eq!(ctx.state_name(), "switch");
    let ctx = FsmContext::Design2(d2());
    let (ctx, a) = ctx.step(S).unwrap();
    assert!(a.is_empty());
    assert_eq!(ctx.state_name(), "B");
}

#[test]
fn every_screen_cell_is_reachable() {
    for cx in 0..16 {
        for cy in 0..16 {
            let target = Rect::new(cx * 64, cy * 48, 64, 48);
            assert_eq!(d1_steps_to_target(screen(), target).unwrap(), 8);
        }
    }
    assert!(d1_steps_to_target(screen(), Rect::new(1000, 0, 64, 48)).is_err());
}

fn events() -> impl Strategy<Value = Vec<FsmEvent>> {
    prop::collection::vec(prop_oneof![Just(S), Just(L)], 0..200)
}

fn is_nav(a: &KeyAction) -> bool {
    matches!(
        a,
        KeyAction::Enter
            | KeyAction::LevelUp
            | KeyAction::RightArrow
            | KeyAction::LeftArrow
            | KeyAction::DownArrow
            | KeyAction::UpArrow
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn split_partitions_rect(x in 0u32..500, y in 0u32..500, w in 1u32..600, h in 1u32..600) {
        let r = Rect::new(x, y, w, h);
        match split_rect(&r) {
            Ok((a, b)) => {
                prop_assert!(r.contains(&a) && r.contains(&b));
                prop_assert_eq!(a.area() + b.area(), r.area());
                prop_assert!(a.area() >= b.area());
                prop_assert!(b.area() > 0);
            }
            Err(_) => prop_assert!(w == 1 && h == 1),
        }
    }

    #[test]
    fn pointer_stays_on_screen(evs in events(), seed in any::<u64>()) {
        let mut c = Design1Context::new(screen(), WordSets::default(), seed).unwrap();
        for e in evs {
            let (n, _) = d1_step(&c, e).unwrap();
            prop_assert!(screen().contains(&n.current));
            let mut outer = screen();
            for p in n.previous.iter().chain(std::iter::once(&n.current)) {
                prop_assert!(outer.contains(p));
                outer = *p;
            }
            prop_assert!(WordSets::default().short.contains(&n.prompt.short));
            prop_assert!(WordSets::default().long.contains(&n.prompt.long));
            c = n;
        }
    }

    #[test]
    fn folder_history_tracks_moves(evs in events()) {
        let mut c = d2();
        let mut depth: i64 = 0;
        for e in evs {
            let was_undo = c.state == D2State::D && e == S;
            let (n, a) = d2_step(&c, e).unwrap();
            prop_assert!(n.tree.node(&n.cursor).is_some());
            for act in &a {
                if is_nav(act) {
                    depth += if was_undo { -1 } else { 1 };
                }
            }
            prop_assert_eq!(n.history.len() as i64, depth);
            c = n;
        }
    }

    #[test]
    fn undo_returns_to_start(evs in events()) {
        let (mut c, _) = run_d2(d2(), &evs);
        // finish any pending menu choice without moving
        while c.state != D2State::A {
            let ev = if c.state == D2State::B { L } else { S };
            let before = c.history.len();
            let (n, a) = d2_step(&c, ev).unwrap();
            if c.state == D2State::C {
                prop_assert!(a.iter().all(|k| is_nav(k) || *k == KeyAction::BlockedEdge));
                prop_assert!(n.history.len() >= before);
            }
            c = n;
        }
        while !c.history.is_empty() {
            c = run_d2(c, &[L, S]).0;
        }
        prop_assert_eq!(c.cursor, vec![0]);
    }
}

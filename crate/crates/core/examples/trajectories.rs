use coach_core::{builtin_profile, simulate};

fn main() {
    for name in ["A", "B", "C"] {
        let t = simulate(&builtin_profile(name).unwrap(), 10, 1).unwrap();
        println!("{name} span={}", t.projected_weeks);
        for w in &t.weeks {
            println!("  {} {} {} {} {:?}", w.week, w.committed_goal, w.goal_volume, w.performed_volume, w.revision);
        }
    }
}

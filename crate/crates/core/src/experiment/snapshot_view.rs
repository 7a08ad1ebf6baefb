use std::f64::consts::FRAC_1_SQRT_2;
use std::fmt::Write as _;

use crate::env::{EnvConfig, EnvKind, Environment, PointMass, scale_action};
use crate::gasil::{Discriminator, GoodTrajectoryBuffer, StateActionPair};
use crate::nn::GaussianPolicy;
use crate::seeding::{self, child_seed};
use crate::{Error, Result};

/// Unit compass directions, east first, counter-clockwise.
pub const COMPASS: [[f64; 2]; 8] = [
    [1.0, 0.0],
    [FRAC_1_SQRT_2, FRAC_1_SQRT_2],
    [0.0, 1.0],
    [-FRAC_1_SQRT_2, FRAC_1_SQRT_2],
    [-1.0, 0.0],
    [-FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
    [0.0, -1.0],
    [FRAC_1_SQRT_2, -FRAC_1_SQRT_2],
];

const PANEL: f64 = 300.0;
const GAP: f64 = 20.0;

/// Rendered figure plus the numbers behind it.
#[derive(Debug, Clone)]
pub struct SnapshotView {
    pub svg: String,
    pub resolution: usize,
    /// Grid cell centres, row-major from the bottom-left cell.
    pub cell_centers: Vec<[f64; 2]>,
    /// Index into [`COMPASS`] of the highest-reward action per cell.
    pub best_actions: Vec<usize>,
    /// Discriminator reward of that action per cell.
    pub best_rewards: Vec<f64>,
    pub policy_paths: Vec<Vec<[f64; 2]>>,
    pub buffer_paths: Vec<Vec<[f64; 2]>>,
}

impl SnapshotView {
    /// Mean best reward over cells within `radius` of a buffer position, and
    /// over the remaining cells. `None` when either set is empty.
    pub fn trajectory_contrast(&self, radius: f64) -> Option<(f64, f64)> {
        let r2 = radius * radius;
        let (mut on, mut off) = (Vec::new(), Vec::new());
        for (c, &r) in self.cell_centers.iter().zip(&self.best_rewards) {
            let near = self.buffer_paths.iter().flatten().any(|p| {
                let (dx, dy) = (p[0] - c[0], p[1] - c[1]);
                dx * dx + dy * dy <= r2
            });
            if near { on.push(r) } else { off.push(r) }
        }
        let mean = |v: &[f64]| v.iter().sum::<f64>() / v.len() as f64;
        (!on.is_empty() && !off.is_empty()).then(|| (mean(&on), mean(&off)))
    }
}

/// Three panels for a point-mass agent: policy rollouts, buffer trajectories,
/// and the discriminator's preferred compass action on a `resolution` x
/// `resolution` grid (collection flags from the nearest buffer state), arrow
/// opacity proportional to its reward.
pub fn render_pointmass_snapshot(
    env: &EnvConfig,
    policy: &GaussianPolicy,
    buffer: &GoodTrajectoryBuffer,
    discriminator: &Discriminator,
    resolution: usize,
    rollouts: usize,
    seed: u64,
) -> Result<SnapshotView> {
    let EnvKind::PointMass = env.env;
    let layout = &env.point_mass;
    let obs_dim = 2 + 4 * layout.objects.len();
    let buffer_obs_ok = buffer
        .episodes()
        .flat_map(|e| e.transitions())
        .all(|t| t.observation.len() == obs_dim);
    if policy.obs_dim() != obs_dim
        || policy.act_dim() != 2
        || discriminator.obs_dim() != obs_dim
        || discriminator.act_dim() != 2
        || !buffer_obs_ok
    {
        return Err(Error::UnsupportedEnv(format!(
            "checkpoints do not match a point mass with {} objects",
            layout.objects.len()
        )));
    }
    if resolution == 0 {
        return Err(Error::config("resolution", "must be positive"));
    }

    let mut world = PointMass::new(layout.clone(), child_seed(seed, 1));
    let mut rng = seeding::stream(seed, seeding::Stream::EvalActions);
    let bound = world.action_bound();
    let mut policy_paths = Vec::with_capacity(rollouts);
    for _ in 0..rollouts {
        let mut obs = world.reset();
        let mut path = vec![world.state().position];
        loop {
            let (action, _) = policy.act(&obs, &mut rng, false)?;
            let step = world.step(&scale_action(&action, bound))?;
            path.push(world.state().position);
            if step.done {
                break;
            }
            obs = step.observation;
        }
        policy_paths.push(path);
    }
    let buffer_paths: Vec<Vec<[f64; 2]>> = buffer
        .episodes()
        .map(|e| e.transitions().iter().map(|t| [t.observation[0], t.observation[1]]).collect())
        .collect();

    // Each cell borrows the collection flags of the nearest buffer state, so
    // the probe matches what a good trajectory has already picked up there.
    let n_obj = layout.objects.len();
    let buffer_states: Vec<([f64; 2], Vec<bool>)> = buffer
        .episodes()
        .flat_map(|e| e.transitions())
        .map(|t| {
            let flags = (0..n_obj).map(|k| t.observation[2 + 4 * k + 2] > 0.5).collect();
            ([t.observation[0], t.observation[1]], flags)
        })
        .collect();
    let fresh = vec![false; n_obj];
    let flags_near = |pos: [f64; 2]| {
        buffer_states
            .iter()
            .min_by(|a, b| dist2(a.0, pos).total_cmp(&dist2(b.0, pos)))
            .map_or(&fresh, |s| &s.1)
    };
    let mut cell_centers = Vec::with_capacity(resolution * resolution);
    let mut best_actions = Vec::with_capacity(resolution * resolution);
    let mut best_rewards = Vec::with_capacity(resolution * resolution);
    for row in 0..resolution {
        for col in 0..resolution {
            let pos = [
                (col as f64 + 0.5) / resolution as f64,
                (row as f64 + 0.5) / resolution as f64,
            ];
            let observation = PointMass::observation_for(layout, pos, flags_near(pos));
            let mut best = (0, f64::NEG_INFINITY);
            for (k, dir) in COMPASS.iter().enumerate() {
                let pair = StateActionPair {
                    observation: observation.clone(),
                    action: vec![dir[0] * bound, dir[1] * bound],
                };
                let r = discriminator.reward(&pair)?;
                if r > best.1 {
                    best = (k, r);
                }
            }
            cell_centers.push(pos);
            best_actions.push(best.0);
            best_rewards.push(best.1);
        }
    }

    let mut view = SnapshotView {
        svg: String::new(),
        resolution,
        cell_centers,
        best_actions,
        best_rewards,
        policy_paths,
        buffer_paths,
    };
    view.svg = draw(&view, env);
    Ok(view)
}

fn dist2(a: [f64; 2], b: [f64; 2]) -> f64 {
    (a[0] - b[0]).powi(2) + (a[1] - b[1]).powi(2)
}

fn draw(view: &SnapshotView, env: &EnvConfig) -> String {
    let width = 3.0 * PANEL + 4.0 * GAP;
    let height = PANEL + 2.0 * GAP + 20.0;
    let mut svg = String::new();
    let _ = writeln!(
        svg,
        r#"<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="12">"#
    );
    let _ = writeln!(svg, r#"<rect width="{width}" height="{height}" fill="white"/>"#);
    let titles = ["policy rollouts", "buffer trajectories", "discriminator preference"];
    for (i, title) in titles.iter().enumerate() {
        let x0 = GAP + i as f64 * (PANEL + GAP);
        let y0 = GAP + 20.0;
        let to_px = |p: [f64; 2]| (x0 + p[0] * PANEL, y0 + (1.0 - p[1]) * PANEL);
        let _ = writeln!(svg, r#"<g class="panel" data-title="{title}">"#);
        let _ = writeln!(
            svg,
            r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{title}</text>"#,
            x0 + PANEL / 2.0,
            GAP + 10.0
        );
        let _ = writeln!(
            svg,
            r#"<rect x="{x0}" y="{y0}" width="{PANEL}" height="{PANEL}" fill="none" stroke="black"/>"#
        );
        for obj in &env.point_mass.objects {
            let (cx, cy) = to_px(obj.position);
            let color = if obj.value >= 10.0 {
                "#2ca02c"
            } else if obj.value > 0.0 {
                "#1f77b4"
            } else {
                "#ff7f0e"
            };
            let _ = writeln!(
                svg,
                r#"<circle class="object" cx="{cx:.2}" cy="{cy:.2}" r="{:.2}" fill="{color}" fill-opacity="0.6"/>"#,
                obj.radius * PANEL
            );
        }
        match i {
            0 | 1 => {
                let paths = if i == 0 { &view.policy_paths } else { &view.buffer_paths };
                for path in paths {
                    let pts: Vec<String> = path
                        .iter()
                        .map(|&p| {
                            let (x, y) = to_px(p);
                            format!("{x:.2},{y:.2}")
                        })
                        .collect();
                    let _ = writeln!(
                        svg,
                        r#"<polyline class="trajectory" points="{}" fill="none" stroke="black" stroke-opacity="0.5"/>"#,
                        pts.join(" ")
                    );
                }
            }
            _ => {
                let top = view.best_rewards.iter().copied().fold(0.0_f64, f64::max);
                let len = 0.4 * PANEL / view.resolution as f64;
                for ((&c, &k), &r) in view.cell_centers.iter().zip(&view.best_actions).zip(&view.best_rewards) {
                    let (x, y) = to_px(c);
                    let d = COMPASS[k];
                    let opacity = if top > 0.0 { r / top } else { 0.0 };
                    let _ = writeln!(
                        svg,
                        r#"<line class="arrow" x1="{:.2}" y1="{:.2}" x2="{:.2}" y2="{:.2}" stroke="black" stroke-opacity="{opacity:.3}" marker-end="url(#head)"/>"#,
                        x - d[0] * len,
                        y + d[1] * len,
                        x + d[0] * len,
                        y - d[1] * len
                    );
                }
            }
        }
        svg.push_str("</g>\n");
    }
    svg.push_str(
        r#"<defs><marker id="head" markerWidth="6" markerHeight="6" refX="5" refY="3" orient="auto"><path d="M0,0 L6,3 L0,6 z"/></marker></defs>"#,
    );
    svg.push_str("\n</svg>\n");
    svg
}

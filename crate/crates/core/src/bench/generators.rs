//! Seeded instance generators for the fourteen benchmark domains.

use std::fmt::Write as _;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::domains;
use crate::config::{EvaluatorId, SearchMode};
use crate::error::{Error, Result};
use crate::model::{numeric_domain, Domain, GpProblem, Instance};
use crate::pddl::{self, print_numeric_instance};

pub const DEFAULT_SEED: u64 = 7;

/// Seed from `GPSYNTH_SEED`, falling back to [`DEFAULT_SEED`].
pub fn seed_from_env() -> Result<u64> {
    match std::env::var("GPSYNTH_SEED") {
        Ok(s) => s
            .trim()
            .parse()
            .map_err(|_| Error::Config(format!("GPSYNTH_SEED must be an unsigned integer, found {s:?}"))),
        Err(_) => Ok(DEFAULT_SEED),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DomainKind {
    Strips(&'static str),
    Numeric,
}

/// Sizes, program bounds and default configuration of one benchmark.
#[derive(Debug, Clone, Copy)]
pub struct BenchmarkSpec {
    pub name: &'static str,
    pub kind: DomainKind,
    /// Size parameter of each training instance, strictly increasing.
    pub train: &'static [usize],
    /// Sizes of held-out instances, all above the training sizes.
    pub validation: &'static [usize],
    pub lines: usize,
    pub pointers: usize,
    pub v: usize,
    pub evaluators: &'static [EvaluatorId],
    pub mode: SearchMode,
}

use EvaluatorId::{Fha, Flm, F1, H5};

const fn strips(
    name: &'static str,
    pddl: &'static str,
    train: &'static [usize],
    validation: &'static [usize],
    (lines, pointers, v): (usize, usize, usize),
    evaluators: &'static [EvaluatorId],
    mode: SearchMode,
) -> BenchmarkSpec {
    BenchmarkSpec {
        name,
        kind: DomainKind::Strips(pddl),
        train,
        validation,
        lines,
        pointers,
        v,
        evaluators,
        mode,
    }
}

const fn numeric(
    name: &'static str,
    train: &'static [usize],
    validation: &'static [usize],
    (lines, pointers, v): (usize, usize, usize),
) -> BenchmarkSpec {
    BenchmarkSpec {
        name,
        kind: DomainKind::Numeric,
        train,
        validation,
        lines,
        pointers,
        v,
        evaluators: &[H5, F1],
        mode: SearchMode::Bfs,
    }
}

pub static BENCHMARKS: [BenchmarkSpec; 14] = [
    strips("baking", domains::BAKING, &[1, 2], &[3, 4], (13, 6, 1), &[Flm, F1, Fha], SearchMode::Pgp),
    strips("corridor", domains::CORRIDOR, &[4, 5, 6], &[9, 12], (10, 2, 2), &[H5, F1], SearchMode::Pgp),
    strips("gripper", domains::GRIPPER, &[1, 2, 3], &[5, 8], (8, 4, 2), &[H5, F1], SearchMode::Pgp),
    strips("intrusion", domains::INTRUSION, &[1, 2, 3], &[5, 8], (9, 1, 1), &[Flm, F1, Fha], SearchMode::Pgp),
    strips("lock", domains::LOCK, &[4, 5, 6], &[9, 12], (12, 2, 2), &[Flm, F1], SearchMode::Pgp),
    strips("ontable", domains::ONTABLE, &[2, 3, 4, 5], &[6, 7], (11, 3, 1), &[Flm, F1, Fha], SearchMode::Pgp),
    strips("spanner", domains::SPANNER, &[1, 2, 3], &[4, 5], (12, 5, 1), &[Flm, F1, Fha], SearchMode::Pgp),
    strips("visitall", domains::VISITALL, &[2, 3, 4], &[7, 10], (7, 2, 1), &[H5, F1], SearchMode::Bfs),
    numeric("fibo", &[3, 4, 6, 8], &[11, 14], (7, 2, 2)),
    numeric("find", &[3, 4, 5], &[8, 12], (6, 3, 1)),
    numeric("reverse", &[2, 3, 4], &[7, 10], (7, 2, 1)),
    numeric("select", &[3, 4, 5, 6], &[7, 10], (6, 2, 1)),
    numeric("sorting", &[3, 4, 5, 6, 7], &[9, 12], (8, 2, 1)),
    numeric("tsum", &[2, 3, 4], &[7, 10], (6, 2, 1)),
];

pub fn benchmark(name: &str) -> Result<&'static BenchmarkSpec> {
    let key = name.trim().to_ascii_lowercase().replace(['.', '-', '_'], "");
    BENCHMARKS.iter().find(|b| b.name == key).ok_or_else(|| {
        let names: Vec<&str> = BENCHMARKS.iter().map(|b| b.name).collect();
        Error::Config(format!("unknown benchmark {name:?}; valid names: {}", names.join(", ")))
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedFile {
    pub name: String,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GeneratedBenchmark {
    pub spec: BenchmarkSpec,
    /// Domain file for STRIPS benchmarks.
    pub domain: Option<GeneratedFile>,
    pub train: Vec<GeneratedFile>,
    pub validation: Vec<GeneratedFile>,
    pub manifest: GeneratedFile,
}

impl PartialEq for BenchmarkSpec {
    fn eq(&self, other: &Self) -> bool {
        self.name == other.name
    }
}

impl Eq for BenchmarkSpec {}

fn name_hash(name: &str) -> u64 {
    // FNV-1a, stable across platforms and releases
    name.bytes()
        .fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ b as u64).wrapping_mul(0x0100_0000_01b3))
}

/// Generates the benchmark at its default sizes.
pub fn generate(spec: &BenchmarkSpec, seed: u64) -> Result<GeneratedBenchmark> {
    generate_sizes(spec, spec.train, spec.validation, seed)
}

/// Generates training and held-out instances of the given sizes.
pub fn generate_sizes(
    spec: &BenchmarkSpec,
    train: &[usize],
    validation: &[usize],
    seed: u64,
) -> Result<GeneratedBenchmark> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ name_hash(spec.name));
    let ext = match spec.kind {
        DomainKind::Strips(_) => "pddl",
        DomainKind::Numeric => "num",
    };
    let mut make = |prefix: &str, sizes: &[usize], offset: usize| -> Result<Vec<GeneratedFile>> {
        sizes
            .iter()
            .enumerate()
            .map(|(i, &size)| {
                let name = format!("{prefix}{:02}", i + 1);
                let text = instance_text(spec, &name, size, offset + i, &mut rng)?;
                Ok(GeneratedFile {
                    name: format!("{name}.{ext}"),
                    text,
                })
            })
            .collect()
    };
    let train_files = make("p", train, 0)?;
    let validation_files = make("v", validation, train.len())?;
    let domain = match spec.kind {
        DomainKind::Strips(src) => Some(GeneratedFile {
            name: "domain.pddl".into(),
            text: pddl::print_domain(&pddl::parse_domain(src)?),
        }),
        DomainKind::Numeric => None,
    };
    let files = |fs: &[GeneratedFile]| fs.iter().map(|f| f.name.as_str()).collect::<Vec<_>>().join(",");
    let evals: Vec<&str> = spec.evaluators.iter().map(|e| e.name()).collect();
    let manifest = format!(
        "domain={}\ninstances={}\nvalidation={}\npointers={}\nlines={}\nv={}\nevaluators={}\nmode={}\n",
        domain.as_ref().map_or(spec.name, |d| d.name.as_str()),
        files(&train_files),
        files(&validation_files),
        spec.pointers,
        spec.lines,
        spec.v,
        evals.join(","),
        spec.mode
    );
    Ok(GeneratedBenchmark {
        spec: *spec,
        domain,
        train: train_files,
        validation: validation_files,
        manifest: GeneratedFile {
            name: "manifest.txt".into(),
            text: manifest,
        },
    })
}

impl GeneratedBenchmark {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let io = |path: &Path, e: std::io::Error| Error::Io {
            path: path.display().to_string(),
            source: e,
        };
        std::fs::create_dir_all(dir).map_err(|e| io(dir, e))?;
        let all = self
            .domain
            .iter()
            .chain(&self.train)
            .chain(&self.validation)
            .chain(std::iter::once(&self.manifest));
        for f in all {
            let path = dir.join(&f.name);
            std::fs::write(&path, &f.text).map_err(|e| io(&path, e))?;
        }
        Ok(())
    }

    pub fn domain(&self) -> Result<Domain> {
        match (&self.domain, self.spec.kind) {
            (Some(d), _) => Ok(Domain::Strips(pddl::parse_domain(&d.text)?)),
            (None, _) => numeric_domain(self.spec.name)
                .map(Domain::Numeric)
                .ok_or_else(|| Error::Config(format!("no builtin domain {}", self.spec.name))),
        }
    }

    fn parse_all(&self, domain: &Domain, files: &[GeneratedFile]) -> Result<Vec<Instance>> {
        files
            .iter()
            .map(|f| match domain {
                Domain::Strips(d) => Ok(Instance::Strips(pddl::parse_instance(&f.text, d)?)),
                Domain::Numeric(_) => Ok(Instance::Numeric(pddl::parse_numeric_instance(&f.text)?.0)),
            })
            .collect()
    }

    /// The training problem, parsed from the generated texts.
    pub fn problem(&self) -> Result<GpProblem> {
        let domain = self.domain()?;
        let instances = self.parse_all(&domain, &self.train)?;
        GpProblem::new(domain, instances, self.spec.pointers, self.spec.lines)
    }

    pub fn validation_instances(&self) -> Result<Vec<Instance>> {
        let domain = self.domain()?;
        self.parse_all(&domain, &self.validation)
    }
}

/// Problem text before canonical printing.
struct Pddl {
    objects: Vec<(String, &'static str)>,
    init: Vec<String>,
    goal: Vec<String>,
}

impl Pddl {
    fn new() -> Self {
        Pddl {
            objects: Vec::new(),
            init: Vec::new(),
            goal: Vec::new(),
        }
    }

    fn objects(&mut self, prefix: &str, count: usize, ty: &'static str) -> Vec<String> {
        let names: Vec<String> = (0..count).map(|i| format!("{prefix}{i}")).collect();
        self.objects.extend(names.iter().map(|n| (n.clone(), ty)));
        names
    }

    fn text(&self, domain: &str, name: &str) -> String {
        let mut s = format!("(define (problem {name}) (:domain {domain})\n (:objects");
        for (o, t) in &self.objects {
            let _ = write!(s, " {o} - {t}");
        }
        s.push_str(")\n (:init");
        for a in &self.init {
            let _ = write!(s, " ({a})");
        }
        s.push_str(")\n (:goal (and");
        for a in &self.goal {
            let _ = write!(s, " ({a})");
        }
        s.push_str(")))\n");
        s
    }
}

fn corridor_cells(p: &mut Pddl, k: usize) -> Vec<String> {
    let c = p.objects("c", k, "cell");
    for i in 0..k.saturating_sub(1) {
        p.init.push(format!("adjacent {} {}", c[i], c[i + 1]));
        p.init.push(format!("adjacent {} {}", c[i + 1], c[i]));
    }
    c
}

fn instance_text(
    spec: &BenchmarkSpec,
    name: &str,
    size: usize,
    index: usize,
    rng: &mut ChaCha8Rng,
) -> Result<String> {
    let k = size.max(1);
    let mut p = Pddl::new();
    match spec.name {
        "visitall" => {
            let c = corridor_cells(&mut p, k.max(2));
            p.init.push(format!("at {}", c[0]));
            p.init.push(format!("visited {}", c[0]));
            p.goal.extend(c.iter().map(|x| format!("visited {x}")));
        }
        "corridor" => {
            let k = k.max(3);
            let c = corridor_cells(&mut p, k);
            // alternate the side of the target so both sweeps are needed
            let (agent, target) = if index.is_multiple_of(2) {
                let a = rng.gen_range(0..k - 1);
                (a, rng.gen_range(a + 1..k))
            } else {
                let a = rng.gen_range(1..k);
                (a, rng.gen_range(0..a))
            };
            p.init.push(format!("at {}", c[agent]));
            p.init.push(format!("visited {}", c[agent]));
            for (i, x) in c.iter().enumerate() {
                if i != target {
                    p.init.push(format!("passable {x}"));
                }
            }
            let (lo, hi) = (agent.min(target), agent.max(target));
            p.goal.extend(c[lo..=hi].iter().map(|x| format!("visited {x}")));
            p.goal.push(format!("at {}", c[target]));
        }
        "lock" => {
            let k = k.max(4);
            let c = corridor_cells(&mut p, k);
            // alternate the side of the agent, at least two cells from the lock
            let (agent, locked) = if index.is_multiple_of(2) {
                let l = rng.gen_range(k / 2..k);
                (rng.gen_range(0..l - 1), l)
            } else {
                let l = rng.gen_range(0..k.div_ceil(2));
                (rng.gen_range(l + 2..k), l)
            };
            p.init.push(format!("at {}", c[agent]));
            p.init.push(format!("locked {}", c[locked]));
            p.goal.push(format!("unlocked {}", c[locked]));
        }
        "gripper" => {
            p.objects.push(("rooma".into(), "room"));
            p.objects.push(("roomb".into(), "room"));
            let b = p.objects("ball", k, "ball");
            p.init.push("at-robby rooma".into());
            p.init.push("free".into());
            for x in &b {
                p.init.push(format!("at {x} rooma"));
                p.goal.push(format!("at {x} roomb"));
            }
        }
        "ontable" => {
            let b = p.objects("b", k, "block");
            let mut tower: Vec<&String> = b.iter().collect();
            tower.shuffle(rng);
            p.init.push("handempty".into());
            p.init.push(format!("ontable {}", tower[0]));
            for w in tower.windows(2) {
                p.init.push(format!("on {} {}", w[1], w[0]));
            }
            p.init.push(format!("clear {}", tower[k - 1]));
            p.goal.extend(b.iter().map(|x| format!("ontable {x}")));
        }
        "intrusion" => {
            let h = p.objects("host", k, "host");
            p.goal.extend(h.iter().map(|x| format!("data-stolen {x}")));
        }
        "baking" => {
            let e = p.objects("egg", k, "egg");
            let f = p.objects("flour", k, "flour");
            p.objects("pan", 1, "pan");
            p.objects("oven", 1, "oven");
            let c = p.objects("cake", k, "cake");
            let s = p.objects("soap", k, "soap");
            p.init.push("pan-clean pan0".into());
            p.init.push("oven-free oven0".into());
            for i in 0..k {
                p.init.push(format!("egg-available {}", e[i]));
                p.init.push(format!("flour-available {}", f[i]));
                p.init.push(format!("cake-pending {}", c[i]));
                p.init.push(format!("soap-available {}", s[i]));
                p.goal.push(format!("baked {}", c[i]));
            }
        }
        "spanner" => {
            p.objects.push(("shed".into(), "location"));
            let l = p.objects("loc", k + 1, "location");
            p.objects.push(("gate".into(), "location"));
            let mut locs = vec!["shed".to_string()];
            locs.extend(l.iter().cloned());
            locs.push("gate".into());
            p.objects.push(("bob".into(), "man"));
            let sp = p.objects("spanner", k, "spanner");
            let nuts = p.objects("nut", k, "nut");
            for w in locs.windows(2) {
                p.init.push(format!("link {} {}", w[0], w[1]));
            }
            p.init.push("at-man bob shed".into());
            for s in &sp {
                let at = &l[rng.gen_range(0..l.len())];
                p.init.push(format!("at-spanner {s} {at}"));
                p.init.push(format!("useable {s}"));
            }
            for n in &nuts {
                p.init.push(format!("at-nut {n} gate"));
                p.init.push(format!("loose {n}"));
                p.goal.push(format!("tightened {n}"));
            }
        }
        _ => return numeric_text(spec.name, name, k, index, rng),
    }
    let domain = match spec.kind {
        DomainKind::Strips(src) => pddl::parse_domain(src)?,
        DomainKind::Numeric => unreachable!("numeric domains handled above"),
    };
    let inst = pddl::parse_instance(&p.text(&domain.name, name), &domain)?;
    Ok(pddl::print_instance(&domain, &inst))
}

pub fn fibonacci(k: usize) -> i64 {
    let (mut a, mut b) = (0i64, 1i64);
    for _ in 0..k {
        (a, b) = (b, a + b);
    }
    a
}

fn numeric_text(domain: &str, name: &str, k: usize, index: usize, rng: &mut ChaCha8Rng) -> Result<String> {
    let (registers, goal): (Vec<i64>, Vec<(usize, i64)>) = match domain {
        // x0..xk with one scratch register after them
        "fibo" => {
            let mut r = vec![0; k + 2];
            r[1] = 1;
            (r, vec![(k, fibonacci(k))])
        }
        // k values, then the counter
        "find" => {
            // the match count cycles through 2, k and 1 + k/2 across instances
            let matches = match index % 3 {
                0 => 2,
                1 => k,
                _ => 1 + k / 2,
            }
            .min(k);
            let key = rng.gen_range(101..109);
            let mut slots: Vec<usize> = (1..k).collect();
            slots.shuffle(rng);
            let mut r = vec![key; k];
            // mismatches alternate between smaller and larger than the key
            for (j, &i) in slots[matches - 1..].iter().enumerate() {
                r[i] = if j % 2 == 0 {
                    rng.gen_range(100..key)
                } else {
                    rng.gen_range(key + 1..110)
                };
            }
            r.push(0);
            (r, vec![(k, matches as i64)])
        }
        // values between two zero sentinels
        "reverse" => {
            let mut r = vec![0];
            r.extend((0..k).map(|_| rng.gen_range(1..100)));
            r.push(0);
            let goal = (1..=k).map(|i| (i, r[k + 1 - i])).collect();
            (r, goal)
        }
        "sorting" => {
            let mut r: Vec<i64> = (1..=k as i64).collect();
            while k > 1 && r.windows(2).all(|w| w[0] < w[1]) {
                r.shuffle(rng);
            }
            (r, (0..k).map(|i| (i, i as i64 + 1)).collect())
        }
        // output register starts at the sentinel 100
        "select" => {
            // distinct values; from three values on, an ascent precedes the minimum
            let mut vals: Vec<i64> = (1..100).collect();
            vals.shuffle(rng);
            vals.truncate(k);
            let min = *vals.iter().min().expect("values");
            let mut rest: Vec<i64> = vals.iter().copied().filter(|&x| x != min).collect();
            // the minimum alternates between the last slot and the middle
            let slot = if k >= 3 {
                if rest[0] > rest[1] {
                    rest.swap(0, 1);
                }
                if index.is_multiple_of(2) {
                    k - 1
                } else {
                    (k / 2).max(2)
                }
            } else {
                k - 1
            };
            rest.insert(slot, min);
            let mut r = vec![100];
            r.extend(rest);
            (r, vec![(0, min)])
        }
        "tsum" => {
            let k = k as i64;
            (vec![k, 0], vec![(1, k * (k + 1) / 2)])
        }
        other => return Err(Error::Config(format!("no generator for {other}"))),
    };
    let inst = crate::model::NumericInstance::new(name, registers, goal)?;
    Ok(print_numeric_instance(&inst, domain))
}

/// Hand-written programs that solve every generated instance of their domain.
pub const REFERENCE_PROGRAMS: [(&str, &str); 12] = [
    ("visitall", "0. inc(z2)\n1. move(z1,z2)\n2. inc(z1)\n3. goto(0, y_z=false)\n4. end\n"),
    (
        "corridor",
        "0. inc(z2)\n1. move(z1,z2)\n2. inc(z1)\n3. inc(z2)\n4. goto(1, y_z=false)\n5. dec(z1)\n6. move(z2,z1)\n7. dec(z2)\n8. goto(5, y_z=false)\n9. end\n",
    ),
    (
        "lock",
        "0. inc(z2)\n1. move(z1,z2)\n2. inc(z1)\n3. inc(z2)\n4. goto(1, y_z=false)\n5. dec(z1)\n6. move(z2,z1)\n7. open(z1)\n8. dec(z2)\n9. goto(5, y_z=false)\n10. end\n",
    ),
    (
        "gripper",
        "0. inc(z2)\n1. pick(z3,z1)\n2. move(z1,z2)\n3. drop(z3,z2)\n4. move(z2,z1)\n5. inc(z3)\n6. goto(1, y_z=false)\n7. end\n",
    ),
    ("ontable", super::FLATTEN_PROGRAM),
    (
        "intrusion",
        "0. recon(z1)\n1. gather-information(z1)\n2. break-into(z1)\n3. gain-root(z1)\n4. download-files(z1)\n5. steal-data(z1)\n6. inc(z1)\n7. goto(0, y_z=false)\n8. end\n",
    ),
    ("fibo", "0. inc(z2)\n1. add(z2,z1)\n2. inc(z2)\n3. add(z2,z1)\n4. inc(z1)\n5. goto(1, !=0)\n6. end\n"),
    ("find", "0. cmp_x(z1,z2)\n1. goto(3, !=0)\n2. count()\n3. inc(z1)\n4. goto(0, !=0)\n5. end\n"),
    ("reverse", "0. inc(z2)\n1. goto(0, !=0)\n2. inc(z1)\n3. dec(z2)\n4. swap(z1,z2)\n5. goto(2, >0)\n6. end\n"),
    (
        "sorting",
        "0. cswap(z1,z2)\n1. inc(z2)\n2. goto(0, !=0)\n3. inc(z1)\n4. goto(7, =0)\n5. set(z1,z2)\n6. goto(0, !=0)\n7. end\n",
    ),
    ("select", "0. cmp_x(z2,z1)\n1. goto(3, >=0)\n2. copy(z1,z2)\n3. inc(z2)\n4. goto(0, !=0)\n5. end\n"),
    ("tsum", "0. inc(z2)\n1. add(z2,z1)\n2. vdec(z1)\n3. goto(1, !=0)\n4. end\n"),
];

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::WorldState;
    use crate::pddl::parse_program;
    use crate::vm::{run, RunOptions};

    #[test]
    fn reference_programs_solve_training_and_held_out() {
        for (name, text) in REFERENCE_PROGRAMS {
            let spec = benchmark(name).unwrap();
            let generated = generate(spec, DEFAULT_SEED).unwrap();
            let problem = generated.problem().unwrap();
            let program = parse_program(text, &problem.domain, spec.pointers, spec.lines)
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            let all = problem.instances.iter().chain(&generated.validation_instances().unwrap()).cloned().collect::<Vec<_>>();
            for inst in &all {
                let out = run(&program, &problem.domain, inst, spec.pointers, &RunOptions::default());
                assert!(out.is_solved(), "{name}/{}: {}", inst.name(), out.verdict());
            }
        }
    }

    #[test]
    fn generation_is_deterministic_and_seed_sensitive() {
        for spec in &BENCHMARKS {
            let a = generate(spec, 3).unwrap();
            assert_eq!(a, generate(spec, 3).unwrap());
            assert!(spec.train.windows(2).all(|w| w[0] < w[1]), "{}", spec.name);
            assert!(spec.validation.iter().all(|v| v > spec.train.last().unwrap()), "{}", spec.name);
            a.problem().unwrap();
            a.validation_instances().unwrap();
        }
        let o1 = generate(benchmark("ontable").unwrap(), 1).unwrap();
        let o2 = generate(benchmark("ontable").unwrap(), 2).unwrap();
        assert_ne!(o1.train, o2.train);
        assert!(benchmark("chess").unwrap_err().to_string().contains("visitall"));
    }

    #[test]
    fn numeric_goals_match_closed_forms() {
        assert_eq!((0..10).map(fibonacci).collect::<Vec<_>>(), [0, 1, 1, 2, 3, 5, 8, 13, 21, 34]);
        for spec in BENCHMARKS.iter().filter(|s| s.kind == DomainKind::Numeric) {
            let g = generate(spec, DEFAULT_SEED).unwrap();
            let sizes = spec.train.iter().chain(spec.validation);
            let insts = g.problem().unwrap().instances.into_iter().chain(g.validation_instances().unwrap());
            for (inst, &k) in insts.zip(sizes) {
                let Instance::Numeric(i) = inst else { panic!() };
                let x = &i.registers;
                match spec.name {
                    "fibo" => assert_eq!(i.goal, vec![(k, fibonacci(k))]),
                    "tsum" => assert_eq!(i.goal, vec![(1, (k * (k + 1) / 2) as i64)]),
                    "find" => {
                        let count = x[..k].iter().filter(|&&v| v == x[0]).count() as i64;
                        assert_eq!(i.goal, vec![(k, count)]);
                    }
                    "select" => assert_eq!(i.goal, vec![(0, *x[1..].iter().min().unwrap())]),
                    "sorting" | "reverse" => {
                        let mut target = x.clone();
                        for &(r, v) in &i.goal {
                            target[r] = v;
                        }
                        let mut expect = x.clone();
                        if spec.name == "sorting" {
                            expect.sort_unstable();
                        } else {
                            expect[1..=k].reverse();
                        }
                        assert_eq!(target, expect);
                        // the goal is a permutation of the input
                        let mut a = x.clone();
                        a.sort_unstable();
                        let mut b = target.clone();
                        b.sort_unstable();
                        assert_eq!(a, b);
                    }
                    _ => unreachable!(),
                }
                assert!(!matches!(i.initial_state(), WorldState::Strips(_)));
            }
        }
    }
}

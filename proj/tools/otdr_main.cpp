// Command-line front end: solve / bench / trace / adapt. Every output
// artifact gets a sibling .manifest JSON recording the command line, resolved
// options, seed, library version, input digests, wall clock, and termination,
// so any artifact can be reproduced from its manifest alone.
#include <Eigen/Core>

#include <chrono>
#include <cstdint>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "otdr/datagen.hpp"
#include "otdr/errors.hpp"
#include "otdr/groups.hpp"
#include "otdr/io.hpp"
#include "otdr/problem.hpp"
#include "otdr/regularizers.hpp"
#include "otdr/sinkhorn.hpp"
#include "otdr/solver.hpp"
#include "otdr/version.hpp"

namespace {

using nlohmann::json;
using namespace otdr;

// ---------------------------------------------------------------------------
// manifest plumbing

std::string fnv1a_digest(const std::string& path, std::uint64_t* bytes) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::uint64_t h = 1469598103934665603ull;
  std::uint64_t count = 0;
  char buf[1 << 16];
  while (in) {
    in.read(buf, sizeof(buf));
    std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ull;
    }
    count += static_cast<std::uint64_t>(got);
  }
  char hex[32];
  std::snprintf(hex, sizeof(hex), "fnv1a:%016llx",
                static_cast<unsigned long long>(h));
  *bytes = count;
  return hex;
}

// plan.csv -> plan.manifest; dotless names just append.
std::string manifest_path(const std::string& artifact) {
  auto slash = artifact.find_last_of('/');
  auto dot = artifact.find_last_of('.');
  if (dot == std::string::npos ||
      (slash != std::string::npos && dot < slash)) {
    return artifact + ".manifest";
  }
  return artifact.substr(0, dot) + ".manifest";
}

struct RunManifest {
  json doc;
  std::vector<std::string> artifacts;
  std::chrono::steady_clock::time_point t0 =
      std::chrono::steady_clock::now();
  bool deterministic = false;

  RunManifest(int argc, char** argv, const std::string& command) {
    doc["argv"] = std::vector<std::string>(argv, argv + argc);
    doc["command"] = command;
    doc["version"] = kVersion;
    doc["inputs"] = json::object();
    doc["options"] = json::object();
    doc["seed"] = nullptr;
  }

  void add_input(const std::string& role, const std::string& path) {
    std::uint64_t bytes = 0;
    std::string digest = fnv1a_digest(path, &bytes);
    doc["inputs"][role] = {
        {"path", path}, {"bytes", bytes}, {"digest", digest}};
  }

  // One identical manifest next to each artifact.
  void write(const std::string& termination) {
    double ms = std::chrono::duration<double, std::milli>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
    doc["elapsed_ms"] = deterministic ? 0.0 : ms;
    doc["termination"] = termination;
    doc["outputs"] = artifacts;
    for (const std::string& a : artifacts) {
      std::string path = manifest_path(a);
      std::ofstream out(path);
      if (!out) throw std::runtime_error("cannot write " + path);
      out << doc.dump(2) << '\n';
    }
  }
};

// ---------------------------------------------------------------------------
// shared option handling

double wall_ms(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now() - t0)
      .count();
}

// --threads, falling back to OT_THREADS; --deterministic pins one thread so
// reduction order cannot depend on the requested count.
int resolve_threads(const std::optional<int>& cli, bool deterministic) {
  int n = 0;
  if (cli) {
    n = *cli;
    if (n < 1) throw std::runtime_error("--threads must be >= 1");
  } else if (const char* env = std::getenv("OT_THREADS")) {
    char* end = nullptr;
    long v = std::strtol(env, &end, 10);
    if (end == env || *end != '\0' || v < 1) {
      throw std::runtime_error(std::string("OT_THREADS is not a positive "
                                           "integer: ") +
                               env);
    }
    n = static_cast<int>(v);
  }
  int effective = deterministic ? 1 : n;
  if (effective > 0) Eigen::setNbThreads(effective);
  return effective;
}

std::pair<Index, Index> parse_size(const std::string& s, const char* flag) {
  auto x = s.find('x');
  std::size_t pos1 = 0, pos2 = 0;
  long m = 0, n = 0;
  try {
    m = std::stol(s.substr(0, x), &pos1);
    n = std::stol(s.substr(x + 1), &pos2);
  } catch (...) {
    x = std::string::npos;
  }
  if (x == std::string::npos || pos1 != x || x + 1 + pos2 != s.size() ||
      m < 1 || n < 1) {
    throw std::runtime_error(std::string(flag) +
                             ": expected MxN with positive integers, got '" +
                             s + "'");
  }
  return {m, n};
}

std::string fmt_param(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// regularizer mini-grammar: name:key=val[,key=val]
// names {none, quad, gl, wl1, forbid, hypent}; unknown keys are errors.

struct RegSources {
  std::optional<GroupPartition> groups;  // --groups file or derived labels
  std::optional<Matrix> weights;         // --weights matrix (wl1)
  std::optional<Matrix> forbid_mask;     // --forbid-mask matrix (forbid)
};

std::unique_ptr<Regularizer> make_regularizer(const std::string& spec,
                                              Index m, Index n,
                                              const RegSources& src,
                                              bool scale_by_mn,
                                              json* resolved) {
  auto colon = spec.find(':');
  std::string name = spec.substr(0, colon);
  std::vector<std::pair<std::string, std::string>> kv;
  if (colon != std::string::npos) {
    std::string body = spec.substr(colon + 1);
    std::size_t at = 0;
    while (at <= body.size()) {
      auto comma = body.find(',', at);
      std::string item = body.substr(
          at, comma == std::string::npos ? std::string::npos : comma - at);
      auto eq = item.find('=');
      if (item.empty() || eq == std::string::npos || eq == 0) {
        throw std::runtime_error("--reg: expected key=val, got '" + item +
                                 "' in '" + spec + "'");
      }
      kv.emplace_back(item.substr(0, eq), item.substr(eq + 1));
      if (comma == std::string::npos) break;
      at = comma + 1;
    }
  }
  auto take = [&](const char* key) -> std::optional<std::string> {
    for (auto it = kv.begin(); it != kv.end(); ++it) {
      if (it->first == key) {
        std::string v = it->second;
        kv.erase(it);
        return v;
      }
    }
    return std::nullopt;
  };
  auto number = [&](const char* key, const std::string& v) {
    std::size_t pos = 0;
    double x = 0.0;
    try {
      x = std::stod(v, &pos);
    } catch (...) {
      pos = 0;
    }
    if (pos != v.size()) {
      throw std::runtime_error(std::string("--reg: ") + name + ":" + key +
                               " is not a number: '" + v + "'");
    }
    return x;
  };
  auto require_positive = [&](const char* key) {
    auto v = take(key);
    if (!v) {
      throw std::runtime_error(std::string("--reg: ") + name + " needs " +
                               key + "=<value>");
    }
    double x = number(key, *v);
    if (!(x > 0.0)) {
      throw std::runtime_error(std::string("--reg: ") + name + ":" + key +
                               " must be > 0, got " + *v);
    }
    return x;
  };
  auto finish = [&]() {
    if (!kv.empty()) {
      throw std::runtime_error("--reg: unknown key '" + kv.front().first +
                               "' for '" + name + "'");
    }
  };
  if (scale_by_mn && name != "quad") {
    throw std::runtime_error("--scale-by-mn applies only to quad:alpha");
  }

  std::unique_ptr<Regularizer> reg;
  if (name == "none") {
    reg = std::make_unique<ZeroReg>();
  } else if (name == "quad") {
    double alpha = require_positive("alpha");
    if (scale_by_mn) alpha *= static_cast<double>(m + n);
    (*resolved)["alpha"] = alpha;
    reg = std::make_unique<QuadraticReg>(alpha);
  } else if (name == "gl") {
    double lambda = require_positive("lambda");
    if (!src.groups) {
      throw std::runtime_error("--reg: gl needs a group partition (--groups "
                               "file, or labeled clouds under adapt)");
    }
    (*resolved)["lambda"] = lambda;
    reg = std::make_unique<GroupLassoReg>(lambda, *src.groups);
  } else if (name == "wl1") {
    if (!src.weights) {
      throw std::runtime_error("--reg: wl1 needs --weights <matrix file>");
    }
    if (src.weights->rows() != m || src.weights->cols() != n) {
      throw std::runtime_error("--weights: matrix must match the cost size");
    }
    reg = std::make_unique<WeightedL1Reg>(*src.weights);
  } else if (name == "forbid") {
    if (!src.forbid_mask) {
      throw std::runtime_error(
          "--reg: forbid needs --forbid-mask <matrix file>");
    }
    if (src.forbid_mask->rows() != m || src.forbid_mask->cols() != n) {
      throw std::runtime_error(
          "--forbid-mask: matrix must match the cost size");
    }
    std::vector<std::pair<Index, Index>> cells;
    for (Index i = 0; i < m; ++i) {
      for (Index j = 0; j < n; ++j) {
        if ((*src.forbid_mask)(i, j) != 0.0) cells.emplace_back(i, j);
      }
    }
    (*resolved)["forbidden_cells"] = cells.size();
    reg = std::make_unique<ForbiddenReg>(m, n, std::move(cells));
  } else if (name == "hypent") {
    double beta = require_positive("beta");
    (*resolved)["beta"] = beta;
    reg = std::make_unique<HypentropicReg>(beta);
  } else {
    throw std::runtime_error("--reg: unknown regularizer '" + name +
                             "' (expected none, quad, gl, wl1, forbid, "
                             "hypent)");
  }
  finish();
  (*resolved)["spec"] = reg->name();
  return reg;
}

// ---------------------------------------------------------------------------
// solver flag block shared by solve and trace

struct SolveFlags {
  double rho = 0.0;
  double tol = 1e-4;
  std::optional<double> tol_gap;
  long max_iter = 100000;
  long check_every = 1;
  bool scale_by_mn = false;
  bool deterministic = false;
  std::optional<int> threads;
};

void add_solve_flags(CLI::App* cmd, SolveFlags* f) {
  cmd->add_option("--rho", f->rho,
                  "DR stepsize; <= 0 selects the default 2/(m+n)");
  cmd->add_option("--tol", f->tol, "primal residual tolerance");
  cmd->add_option("--tol-gap", f->tol_gap,
                  "also require |gap| and dual residual below this");
  cmd->add_option("--max-iter", f->max_iter, "iteration cap");
  cmd->add_option("--check-every", f->check_every,
                  "residual check cadence in iterations");
  cmd->add_flag("--scale-by-mn", f->scale_by_mn,
                "multiply quad alpha by (m+n)");
  cmd->add_flag("--deterministic", f->deterministic,
                "byte-identical outputs: one thread, zeroed wall-clock");
  cmd->add_option("--threads", f->threads,
                  "Eigen thread cap (env OT_THREADS as fallback)");
}

void validate_solve_flags(const SolveFlags& f) {
  if (!(f.tol > 0.0)) throw std::runtime_error("--tol must be > 0");
  if (f.tol_gap && !(*f.tol_gap > 0.0)) {
    throw std::runtime_error("--tol-gap must be > 0");
  }
  if (f.max_iter < 1) throw std::runtime_error("--max-iter must be >= 1");
  if (f.check_every < 1) {
    throw std::runtime_error("--check-every must be >= 1");
  }
}

SolverOptions to_options(const SolveFlags& f, bool record_trace) {
  SolverOptions opt;
  opt.rho = f.rho;
  opt.tol_primal = f.tol;
  opt.tol_gap = f.tol_gap;
  opt.max_iter = f.max_iter;
  opt.check_every = f.check_every;
  opt.deterministic = f.deterministic;
  opt.record_trace = record_trace;
  return opt;
}

json options_json(const SolveFlags& f, int threads) {
  json j;
  j["rho"] = f.rho;
  j["tol"] = f.tol;
  if (f.tol_gap) j["tol_gap"] = *f.tol_gap;
  j["max_iter"] = f.max_iter;
  j["check_every"] = f.check_every;
  j["scale_by_mn"] = f.scale_by_mn;
  j["deterministic"] = f.deterministic;
  j["threads"] = threads;
  return j;
}

int exit_code(Termination t) {
  return t == Termination::Converged ? 0 : 2;
}

Vector uniform_marginal(Index n) {
  return Vector::Constant(n, 1.0 / static_cast<double>(n));
}

// ---------------------------------------------------------------------------
// solve

struct SolveArgs {
  std::string cost, p, q;
  std::string reg = "none";
  std::string groups, weights, forbid_mask;
  std::string out, trace;
  bool normalize = false;
  SolveFlags flags;
};

int run_solve(const SolveArgs& a, RunManifest& man) {
  validate_solve_flags(a.flags);
  int threads = resolve_threads(a.flags.threads, a.flags.deterministic);
  man.deterministic = a.flags.deterministic;

  Matrix C = read_matrix(a.cost);
  man.add_input("cost", a.cost);
  Vector p = a.p.empty() ? uniform_marginal(C.rows()) : read_vector(a.p);
  if (!a.p.empty()) man.add_input("p", a.p);
  Vector q = a.q.empty() ? uniform_marginal(C.cols()) : read_vector(a.q);
  if (!a.q.empty()) man.add_input("q", a.q);
  Problem pr = validate_problem(std::move(C), std::move(p), std::move(q));
  if (a.normalize) pr = normalize_cost(std::move(pr));

  RegSources src;
  if (!a.groups.empty()) {
    src.groups = read_groups(a.groups, pr.rows(), pr.cols());
    man.add_input("groups", a.groups);
  }
  if (!a.weights.empty()) {
    src.weights = read_matrix(a.weights);
    man.add_input("weights", a.weights);
  }
  if (!a.forbid_mask.empty()) {
    src.forbid_mask = read_matrix(a.forbid_mask);
    man.add_input("forbid_mask", a.forbid_mask);
  }
  json reg_json;
  auto reg = make_regularizer(a.reg, pr.rows(), pr.cols(), src,
                              a.flags.scale_by_mn, &reg_json);

  SolveReport rep = solve(pr, *reg, to_options(a.flags, !a.trace.empty()));

  if (a.out.size() >= 5 && a.out.substr(a.out.size() - 5) == ".otpb") {
    write_matrix_otpb(a.out, rep.plan());
  } else {
    write_matrix_csv(a.out, rep.plan());
  }
  man.artifacts.push_back(a.out);
  if (!a.trace.empty()) {
    write_trace_csv(a.trace, rep.trace);
    man.artifacts.push_back(a.trace);
  }

  json opts = options_json(a.flags, threads);
  opts["reg"] = reg_json;
  opts["normalize"] = a.normalize;
  opts["rho_used"] = rep.rho;
  opts["iterations"] = rep.iterations;
  opts["r_primal"] = rep.r_primal;
  opts["objective"] = rep.objective;
  man.doc["options"] = opts;
  man.write(to_string(rep.termination));

  std::cerr << "otdr solve: " << to_string(rep.termination) << " after "
            << rep.iterations << " iterations, r_primal = " << rep.r_primal
            << "\n";
  return exit_code(rep.termination);
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::vector<std::string> sizes;
  std::vector<double> alphas;
  long seeds = 1;
  std::string compare;
  std::vector<double> eps;
  std::string out;
  SolveFlags flags;  // tol/max_iter/check_every reused for both methods
};

const char* method_suffix(Termination t) {
  switch (t) {
    case Termination::Converged: return "";
    case Termination::MaxIter: return "-maxiter";
    case Termination::Stalled: return "-stalled";
  }
  return "";
}

int run_bench(const BenchArgs& a, RunManifest& man) {
  validate_solve_flags(a.flags);
  int threads = resolve_threads(a.flags.threads, a.flags.deterministic);
  man.deterministic = a.flags.deterministic;

  if (a.sizes.empty()) throw std::runtime_error("--sizes is required");
  if (a.seeds < 1) throw std::runtime_error("--seeds must be >= 1");
  if (!a.compare.empty() && a.compare != "sinkhorn") {
    throw std::runtime_error("--compare: only 'sinkhorn' is supported");
  }
  if (!a.eps.empty() && a.compare.empty()) {
    throw std::runtime_error("--eps requires --compare sinkhorn");
  }
  if (a.compare == "sinkhorn" && a.eps.empty()) {
    throw std::runtime_error("--compare sinkhorn requires --eps");
  }
  for (double alpha : a.alphas) {
    if (!(alpha > 0.0)) throw std::runtime_error("--alphas must be > 0");
  }
  for (double e : a.eps) {
    if (!(e > 0.0)) throw std::runtime_error("--eps must be > 0");
  }
  if (a.alphas.empty() && a.eps.empty()) {
    throw std::runtime_error("nothing to run: give --alphas and/or "
                             "--compare sinkhorn --eps");
  }

  std::vector<std::pair<Index, Index>> sizes;
  for (const std::string& s : a.sizes) sizes.push_back(parse_size(s, "--sizes"));

  std::ofstream out(a.out);
  if (!out) throw std::runtime_error("cannot write " + a.out);
  out << "method,m,n,reg,seed,iters,elapsed_ms,final_residual,objective\n";
  long rows = 0;
  auto emit = [&](const std::string& method, Index m, Index n,
                  const std::string& reg, std::uint64_t seed,
                  const SolveReport& rep, double ms) {
    out << method << ',' << m << ',' << n << ',' << reg << ',' << seed << ','
        << rep.iterations << ','
        << format_double(a.flags.deterministic ? 0.0 : ms) << ','
        << format_double(rep.r_primal) << ','
        << format_double(rep.objective) << '\n';
    ++rows;
  };

  for (auto [m, n] : sizes) {
    for (std::uint64_t seed = 0;
         seed < static_cast<std::uint64_t>(a.seeds); ++seed) {
      GaussianProblem gp = gaussian_problem(m, n, seed);
      for (double alpha : a.alphas) {
        double scaled = a.flags.scale_by_mn
                            ? alpha * static_cast<double>(m + n)
                            : alpha;
        QuadraticReg reg(scaled);
        auto t0 = std::chrono::steady_clock::now();
        SolveReport rep = solve(gp.problem, reg, to_options(a.flags, false));
        emit(std::string("rdrot") + method_suffix(rep.termination), m, n,
             reg.name(), seed, rep, wall_ms(t0));
      }
      for (double e : a.eps) {
        SinkhornOptions so;
        so.epsilon = e;
        so.tol = a.flags.tol;
        so.max_iter = a.flags.max_iter;
        so.check_every = a.flags.check_every;
        so.log_domain = true;
        auto t0 = std::chrono::steady_clock::now();
        SolveReport rep = sinkhorn(gp.problem, so);
        emit(std::string("sinkhorn") + method_suffix(rep.termination), m, n,
             "eps=" + fmt_param(e), seed, rep, wall_ms(t0));
      }
    }
  }
  out.close();
  man.artifacts.push_back(a.out);

  json opts = options_json(a.flags, threads);
  opts["sizes"] = a.sizes;
  opts["alphas"] = a.alphas;
  opts["seeds"] = a.seeds;
  if (!a.compare.empty()) {
    opts["compare"] = a.compare;
    opts["eps"] = a.eps;
  }
  opts["rows"] = rows;
  man.doc["options"] = opts;
  man.write("Completed");

  std::cerr << "otdr bench: " << rows << " rows -> " << a.out << "\n";
  return 0;
}

// ---------------------------------------------------------------------------
// trace

struct TraceArgs {
  std::string size;
  long seed = 0;
  std::string cost, p, q;
  std::string reg = "none";
  std::string groups, weights, forbid_mask;
  std::string out;
  bool normalize = false;
  SolveFlags flags;
};

int run_trace(const TraceArgs& a, RunManifest& man) {
  validate_solve_flags(a.flags);
  int threads = resolve_threads(a.flags.threads, a.flags.deterministic);
  man.deterministic = a.flags.deterministic;

  Problem pr;
  if (!a.size.empty()) {
    auto [m, n] = parse_size(a.size, "--size");
    pr = gaussian_problem(m, n, static_cast<std::uint64_t>(a.seed)).problem;
    man.doc["seed"] = a.seed;
  } else {
    if (a.cost.empty()) {
      throw std::runtime_error("trace needs --size MxN or --cost FILE");
    }
    Matrix C = read_matrix(a.cost);
    man.add_input("cost", a.cost);
    Vector p = a.p.empty() ? uniform_marginal(C.rows()) : read_vector(a.p);
    if (!a.p.empty()) man.add_input("p", a.p);
    Vector q = a.q.empty() ? uniform_marginal(C.cols()) : read_vector(a.q);
    if (!a.q.empty()) man.add_input("q", a.q);
    pr = validate_problem(std::move(C), std::move(p), std::move(q));
    if (a.normalize) pr = normalize_cost(std::move(pr));
  }

  RegSources src;
  if (!a.groups.empty()) {
    src.groups = read_groups(a.groups, pr.rows(), pr.cols());
    man.add_input("groups", a.groups);
  }
  if (!a.weights.empty()) {
    src.weights = read_matrix(a.weights);
    man.add_input("weights", a.weights);
  }
  if (!a.forbid_mask.empty()) {
    src.forbid_mask = read_matrix(a.forbid_mask);
    man.add_input("forbid_mask", a.forbid_mask);
  }
  json reg_json;
  auto reg = make_regularizer(a.reg, pr.rows(), pr.cols(), src,
                              a.flags.scale_by_mn, &reg_json);

  SolveReport rep = solve(pr, *reg, to_options(a.flags, true));
  write_trace_csv(a.out, rep.trace);
  man.artifacts.push_back(a.out);

  json opts = options_json(a.flags, threads);
  opts["reg"] = reg_json;
  if (!a.size.empty()) opts["size"] = a.size;
  opts["iterations"] = rep.iterations;
  opts["r_primal"] = rep.r_primal;
  opts["support_last_change"] = rep.support_last_change;
  man.doc["options"] = opts;
  man.write(to_string(rep.termination));

  std::cerr << "otdr trace: " << to_string(rep.termination) << ", "
            << rep.trace.size() << " rows -> " << a.out << "\n";
  return exit_code(rep.termination);
}

// ---------------------------------------------------------------------------
// adapt

struct AdaptArgs {
  std::string source, target;
  std::string toy;
  int classes = 2;
  long seed = 0;
  std::string reg = "gl:lambda=0.06";
  std::optional<double> entropic;
  std::string out;
  SolveFlags flags;
};

int run_adapt(const AdaptArgs& a, RunManifest& man) {
  validate_solve_flags(a.flags);
  int threads = resolve_threads(a.flags.threads, a.flags.deterministic);
  man.deterministic = a.flags.deterministic;

  Problem pr;
  GroupPartition groups;
  PointCloud source, target;
  if (!a.toy.empty()) {
    auto [m, n] = parse_size(a.toy, "--toy");
    if (a.classes < 1) throw std::runtime_error("--classes must be >= 1");
    AdaptationProblem ap = adaptation_problem(
        m, n, a.classes, static_cast<std::uint64_t>(a.seed));
    pr = std::move(ap.problem);
    groups = std::move(ap.groups);
    source = std::move(ap.source);
    target = std::move(ap.target);
    man.doc["seed"] = a.seed;
  } else {
    if (a.source.empty() || a.target.empty()) {
      throw std::runtime_error("adapt needs --source and --target point "
                               "clouds, or --toy MxN");
    }
    source = read_point_cloud(a.source);
    man.add_input("source", a.source);
    target = read_point_cloud(a.target);
    man.add_input("target", a.target);
    if (source.labels.empty()) {
      throw std::runtime_error("--source: point cloud has no labels");
    }
    if (target.labels.empty()) {
      throw std::runtime_error("--target: point cloud has no labels");
    }
    pr = normalize_cost(validate_problem(
        squared_distance_cost(source, target),
        uniform_marginal(source.size()), uniform_marginal(target.size())));
    groups = column_class_blocks(source.labels, target.size());
  }

  json reg_json;
  Termination term = Termination::Converged;
  Matrix plan;
  if (a.entropic) {
    if (!(*a.entropic > 0.0)) {
      throw std::runtime_error("--entropic must be > 0");
    }
    SinkhornOptions so;
    so.epsilon = *a.entropic;
    so.tol = a.flags.tol;
    so.max_iter = a.flags.max_iter;
    so.check_every = a.flags.check_every;
    so.log_domain = true;
    SolveReport rep = sinkhorn(pr, so);
    term = rep.termination;
    plan = rep.plan();
    reg_json["spec"] = "entropic:eps=" + fmt_param(*a.entropic);
  } else {
    RegSources src;
    src.groups = groups;
    auto reg = make_regularizer(a.reg, pr.rows(), pr.cols(), src,
                                a.flags.scale_by_mn, &reg_json);
    SolveReport rep = solve(pr, *reg, to_options(a.flags, false));
    term = rep.termination;
    plan = rep.plan();
  }

  BarycentricResult mapped = barycentric_map(plan, pr.p, target, &source);
  double score = class_w2_score(mapped.cloud, target);

  write_point_cloud(a.out, mapped.cloud);
  man.artifacts.push_back(a.out);

  json opts = options_json(a.flags, threads);
  opts["reg"] = reg_json;
  if (!a.toy.empty()) {
    opts["toy"] = a.toy;
    opts["classes"] = a.classes;
  }
  opts["class_w2_score"] = score;
  opts["unmapped_rows"] = mapped.unmapped.size();
  man.doc["options"] = opts;
  man.write(to_string(term));

  std::cout << "class_w2_score " << format_double(score) << "\n";
  std::cerr << "otdr adapt: " << to_string(term) << " -> " << a.out << "\n";
  return exit_code(term);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Regularized discrete optimal transport via Douglas-Rachford "
               "splitting"};
  app.require_subcommand(1);

  SolveArgs sa;
  CLI::App* solve_cmd =
      app.add_subcommand("solve", "solve one instance and write the plan");
  solve_cmd->add_option("--cost", sa.cost, "cost matrix (CSV or OTPB)")
      ->required();
  solve_cmd->add_option("--p", sa.p, "row marginal (default uniform)");
  solve_cmd->add_option("--q", sa.q, "column marginal (default uniform)");
  solve_cmd->add_option("--reg", sa.reg,
                        "regularizer, name:key=val[,key=val]");
  solve_cmd->add_option("--groups", sa.groups, "group partition file (gl)");
  solve_cmd->add_option("--weights", sa.weights, "weight matrix file (wl1)");
  solve_cmd->add_option("--forbid-mask", sa.forbid_mask,
                        "nonzero entries mark forbidden cells (forbid)");
  solve_cmd->add_flag("--normalize", sa.normalize,
                      "rescale the cost to max entry 1");
  solve_cmd->add_option("--out", sa.out, "plan output (.csv or .otpb)")
      ->required();
  solve_cmd->add_option("--trace", sa.trace, "also write a trace CSV");
  add_solve_flags(solve_cmd, &sa.flags);

  BenchArgs ba;
  CLI::App* bench_cmd = app.add_subcommand(
      "bench", "quadratic-RDROT / Sinkhorn sweep over seeded instances");
  bench_cmd->add_option("--sizes", ba.sizes, "instance sizes, MxN[,MxN...]")
      ->delimiter(',')
      ->required();
  bench_cmd->add_option("--alphas", ba.alphas, "quad alphas to sweep")
      ->delimiter(',');
  bench_cmd->add_option("--seeds", ba.seeds, "run seeds 0..N-1");
  bench_cmd->add_option("--compare", ba.compare,
                        "baseline to add (sinkhorn)");
  bench_cmd->add_option("--eps", ba.eps, "sinkhorn epsilons")->delimiter(',');
  bench_cmd->add_option("--out", ba.out, "benchmark CSV")->required();
  add_solve_flags(bench_cmd, &ba.flags);
  ba.flags.max_iter = 50000;
  ba.flags.check_every = 10;

  TraceArgs ta;
  CLI::App* trace_cmd = app.add_subcommand(
      "trace", "single solve with per-iteration residual/support trace");
  CLI::Option* trace_size =
      trace_cmd->add_option("--size", ta.size, "generate a seeded MxN instance");
  trace_cmd->add_option("--seed", ta.seed, "seed for --size");
  trace_cmd->add_option("--cost", ta.cost, "cost matrix (CSV or OTPB)")
      ->excludes(trace_size);
  trace_cmd->add_option("--p", ta.p, "row marginal (default uniform)");
  trace_cmd->add_option("--q", ta.q, "column marginal (default uniform)");
  trace_cmd->add_option("--reg", ta.reg,
                        "regularizer, name:key=val[,key=val]");
  trace_cmd->add_option("--groups", ta.groups, "group partition file (gl)");
  trace_cmd->add_option("--weights", ta.weights, "weight matrix file (wl1)");
  trace_cmd->add_option("--forbid-mask", ta.forbid_mask,
                        "nonzero entries mark forbidden cells (forbid)");
  trace_cmd->add_flag("--normalize", ta.normalize,
                      "rescale the cost to max entry 1");
  trace_cmd->add_option("--out", ta.out, "trace CSV")->required();
  add_solve_flags(trace_cmd, &ta.flags);

  AdaptArgs aa;
  CLI::App* adapt_cmd = app.add_subcommand(
      "adapt", "domain adaptation: solve, map barycentrically, score");
  CLI::Option* adapt_source =
      adapt_cmd->add_option("--source", aa.source, "labeled source cloud CSV");
  CLI::Option* adapt_target =
      adapt_cmd->add_option("--target", aa.target, "labeled target cloud CSV");
  adapt_cmd->add_option("--toy", aa.toy, "generate a toy MxN instance")
      ->excludes(adapt_source)
      ->excludes(adapt_target);
  adapt_cmd->add_option("--classes", aa.classes, "classes for --toy");
  adapt_cmd->add_option("--seed", aa.seed, "seed for --toy");
  adapt_cmd->add_option("--reg", aa.reg,
                        "regularizer, name:key=val[,key=val]");
  adapt_cmd
      ->add_option("--entropic", aa.entropic,
                   "map with a Sinkhorn plan at this epsilon instead")
      ->excludes("--reg");
  adapt_cmd->add_option("--out", aa.out, "adapted cloud CSV")->required();
  add_solve_flags(adapt_cmd, &aa.flags);
  aa.flags.tol = 1e-6;
  aa.flags.max_iter = 500000;
  aa.flags.check_every = 10;

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (*solve_cmd) {
      RunManifest man(argc, argv, "solve");
      return run_solve(sa, man);
    }
    if (*bench_cmd) {
      RunManifest man(argc, argv, "bench");
      return run_bench(ba, man);
    }
    if (*trace_cmd) {
      RunManifest man(argc, argv, "trace");
      return run_trace(ta, man);
    }
    RunManifest man(argc, argv, "adapt");
    return run_adapt(aa, man);
  } catch (const std::exception& e) {
    std::cerr << "otdr: " << e.what() << "\n";
    return 1;
  }
}

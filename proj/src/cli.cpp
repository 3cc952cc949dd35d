#include "grnn/cli.hpp"

#include "grnn/builtin.hpp"
#include "grnn/classify.hpp"
#include "grnn/dynamics.hpp"
#include "grnn/errors.hpp"
#include "grnn/spec_io.hpp"
#include "grnn/stability.hpp"
#include "grnn/text_format.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <optional>
#include <sstream>

namespace grnn::cli {

namespace {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

class IoError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

struct Options
{
  std::string command;
  std::string builtin;
  std::string spec_path;
  std::string embedded_spec; ///< set by replay; takes precedence over the above
  int param_set = 1;
  std::vector<std::string> overrides;
  std::vector<std::string> inputs;
  std::vector<std::string> init;
  std::string out;
  std::optional<double> t_end;
  double rel_tol = 1e-8;
  double abs_tol = 1e-10;
  std::size_t samples = 0; ///< 0: command default
  std::string mode = "analytic";
  double epsilon = kDefaultStabilizationBand;
  std::string grid = "200x200";
  std::string range;
  double threshold = 0.5;
  std::string scale = "normalized";
};

Json to_json(const Options& o)
{
  Json j;
  j["command"] = o.command;
  j["builtin"] = o.builtin;
  j["spec_path"] = o.spec_path;
  j["param_set"] = o.param_set;
  j["overrides"] = o.overrides;
  j["inputs"] = o.inputs;
  j["init"] = o.init;
  j["out"] = o.out;
  j["t_end"] = o.t_end ? Json(*o.t_end) : Json();
  j["rel_tol"] = o.rel_tol;
  j["abs_tol"] = o.abs_tol;
  j["samples"] = o.samples;
  j["mode"] = o.mode;
  j["epsilon"] = o.epsilon;
  j["grid"] = o.grid;
  j["range"] = o.range;
  j["threshold"] = o.threshold;
  j["scale"] = o.scale;
  return j;
}

Options from_json(const Json& j)
{
  Options o;
  o.command = j.at("command").get<std::string>();
  o.builtin = j.at("builtin").get<std::string>();
  o.spec_path = j.at("spec_path").get<std::string>();
  o.param_set = j.at("param_set").get<int>();
  o.overrides = j.at("overrides").get<std::vector<std::string>>();
  o.inputs = j.at("inputs").get<std::vector<std::string>>();
  o.init = j.at("init").get<std::vector<std::string>>();
  o.out = j.at("out").get<std::string>();
  if (!j.at("t_end").is_null()) {
    o.t_end = j.at("t_end").get<double>();
  }
  o.rel_tol = j.at("rel_tol").get<double>();
  o.abs_tol = j.at("abs_tol").get<double>();
  o.samples = j.at("samples").get<std::size_t>();
  o.mode = j.at("mode").get<std::string>();
  o.epsilon = j.at("epsilon").get<double>();
  o.grid = j.at("grid").get<std::string>();
  o.range = j.at("range").get<std::string>();
  o.threshold = j.at("threshold").get<double>();
  o.scale = j.at("scale").get<std::string>();
  return o;
}

double parse_number(std::string_view text, std::string_view what)
{
  double value = 0.0;
  const char* first = text.data();
  const char* last = text.data() + text.size();
  if (!text.empty() && *first == '+') {
    ++first;
  }
  const auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || text.empty()) {
    throw UsageError("cannot read " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

std::size_t parse_count(std::string_view text, std::string_view what)
{
  std::size_t value = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty()) {
    throw UsageError("cannot read " + std::string(what) + " from '" + std::string(text) + "'");
  }
  return value;
}

std::pair<std::string, std::string> split_assignment(const std::string& text)
{
  const auto eq = text.rfind('=');
  if (eq == std::string::npos || eq == 0 || eq + 1 == text.size()) {
    throw UsageError("expected key=value, got '" + text + "'");
  }
  return {text.substr(0, eq), text.substr(eq + 1)};
}

std::vector<std::string> split(const std::string& text, char sep)
{
  std::vector<std::string> parts;
  std::string part;
  std::istringstream in(text);
  while (std::getline(in, part, sep)) {
    parts.push_back(part);
  }
  return parts;
}

void apply_override(Grnn& net, const std::string& text)
{
  const auto [target, value_text] = split_assignment(text);
  const double value = parse_number(value_text, "override value");
  const auto dot = target.rfind('.');
  if (dot == std::string::npos || dot == 0) {
    throw UsageError("override must look like gene.param=value, got '" + text + "'");
  }
  const std::string subject = target.substr(0, dot);
  const std::string param = target.substr(dot + 1);

  if (param == "k_half") {
    const auto arrow = subject.find("->");
    bool matched = false;
    for (auto& e : net.edges) {
      const bool hit = arrow == std::string::npos
                           ? e.target == subject
                           : e.source == subject.substr(0, arrow) &&
                                 e.target == subject.substr(arrow + 2);
      if (hit) {
        e.k_half = value;
        matched = true;
      }
    }
    if (!matched) {
      throw InvalidArgument("override '" + text + "' matches no edge");
    }
    return;
  }
  auto it = net.genes.find(subject);
  if (it == net.genes.end()) {
    throw InvalidArgument("override names unknown gene '" + subject + "'");
  }
  GenePerceptron& g = it->second;
  if (param == "k1") g.k1 = value;
  else if (param == "k2") g.k2 = value;
  else if (param == "d1") g.d1 = value;
  else if (param == "d2") g.d2 = value;
  else if (param == "copy_number") g.copy_number = value;
  else if (param == "hill_n") g.hill_n = value;
  else throw UsageError("unknown parameter '" + param + "' in override '" + text + "'");
}

struct Source
{
  Grnn net;
  const BuiltinNetwork* builtin = nullptr;
};

Source load_source(const Options& o)
{
  Source s;
  if (!o.embedded_spec.empty()) {
    s.net = load_spec(o.embedded_spec);
    if (!o.builtin.empty()) {
      s.builtin = &builtin_network(o.builtin);
    }
  } else if (!o.builtin.empty()) {
    if (!o.spec_path.empty()) {
      throw UsageError("--builtin and --spec are mutually exclusive");
    }
    s.builtin = &builtin_network(o.builtin);
    if (o.param_set < 1 || o.param_set > s.builtin->parameter_sets()) {
      throw UsageError("builtin '" + o.builtin + "' has parameter sets 1.." +
                       std::to_string(s.builtin->parameter_sets()));
    }
    s.net = s.builtin->load(o.param_set);
  } else if (!o.spec_path.empty()) {
    if (o.param_set != 1) {
      throw UsageError("--param-set only applies to builtin networks");
    }
    std::ifstream probe(o.spec_path);
    if (!probe) {
      throw IoError("cannot read spec file '" + o.spec_path + "'");
    }
    s.net = load_spec_file(o.spec_path);
  } else {
    throw UsageError("give a network with --builtin <name> or --spec <path>");
  }
  for (const auto& ov : o.overrides) {
    apply_override(s.net, ov);
  }
  return s;
}

InputAssignment resolve_inputs(const Options& o, const Source& s)
{
  InputAssignment values;
  for (const auto& id : s.net.inputs) {
    values[id] = 0.0;
  }
  if (s.builtin) {
    for (const auto& [id, v] : s.builtin->operating_point) {
      if (values.count(id)) {
        values[id] = v;
      }
    }
  }
  for (const auto& text : o.inputs) {
    const auto [id, v] = split_assignment(text);
    if (!values.count(id)) {
      throw InvalidArgument("unknown input '" + id + "'");
    }
    values[id] = parse_number(v, "input value");
  }
  return values;
}

InitialStates resolve_init(const Options& o)
{
  InitialStates init;
  for (const auto& text : o.init) {
    const auto [id, v] = split_assignment(text);
    const auto parts = split(v, ':');
    if (parts.size() != 2) {
      throw UsageError("--init expects gene=rna:protein, got '" + text + "'");
    }
    init[id] = {parse_number(parts[0], "initial RNA"), parse_number(parts[1], "initial protein"),
                0.0};
  }
  return init;
}

double auto_horizon(const Grnn& net)
{
  double d_min = std::numeric_limits<double>::infinity();
  for (const auto& [id, g] : net.genes) {
    const GenePerceptron p = net.per_second(id);
    d_min = std::min({d_min, p.d1, p.d2});
  }
  return std::isfinite(d_min) ? 40.0 / d_min : 1.0;
}

struct Artifact
{
  std::string name;
  std::string content;
};

std::string safe_name(const std::string& id)
{
  std::string s = id;
  for (char& c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.')) {
      c = '_';
    }
  }
  return s;
}

void write_artifacts(const Options& o, const Source& s, const InputAssignment& inputs,
                     const std::vector<std::string>& argv, std::vector<Artifact> files)
{
  if (o.out.empty()) {
    return;
  }
  Options recorded = o;
  recorded.inputs.clear();
  for (const auto& [id, v] : inputs) {
    recorded.inputs.push_back(id + "=" + format_double(v));
  }
  Json manifest;
  manifest["tool"] = kToolName;
  manifest["version"] = kVersion;
  manifest["command"] = o.command;
  manifest["argv"] = argv;
  manifest["options"] = to_json(recorded);
  manifest["resolved_spec"] = Json::parse(save_spec(s.net));
  Json names = Json::array();
  for (const auto& f : files) {
    names.push_back(f.name);
  }
  manifest["artifacts"] = names;
  files.push_back({"manifest.json", manifest.dump(2) + "\n"});

  std::error_code ec;
  std::filesystem::create_directories(o.out, ec);
  if (ec) {
    throw IoError("cannot create output directory '" + o.out + "': " + ec.message());
  }
  for (const auto& f : files) {
    const auto path = std::filesystem::path(o.out) / f.name;
    std::ofstream file(path, std::ios::binary);
    file << f.content;
    if (!file) {
      throw IoError("cannot write '" + path.string() + "'");
    }
  }
}

int cmd_validate(const Options& o, std::ostream& out)
{
  const Source s = load_source(o);
  const ValidationReport report = validate(s.net);
  if (report.ok()) {
    out << "ok\n";
    return kSuccess;
  }
  for (const auto& v : report.violations) {
    out << to_string(v.kind) << ": " << v.message << '\n';
  }
  return kDomainError;
}

int cmd_steady_state(const Options& o, const std::vector<std::string>& argv, std::ostream& out)
{
  const Source s = load_source(o);
  require_valid(s.net);
  const InputAssignment inputs = resolve_inputs(o, s);
  const NetworkPlan plan(s.net);
  const auto steady = plan.steady_states(plan.input_vector(inputs));
  std::ostringstream csv;
  csv << "gene,rna,protein,normalized\n";
  for (std::size_t i = 0; i < plan.gene_count(); ++i) {
    csv << plan.gene(i).id << ',' << format_double(steady[i].rna) << ','
        << format_double(steady[i].protein) << ',' << format_double(steady[i].normalized)
        << '\n';
  }
  write_artifacts(o, s, inputs, argv, {{"steady_state.csv", csv.str()}});
  out << csv.str();
  return kSuccess;
}

int cmd_simulate(const Options& o, const std::vector<std::string>& argv, std::ostream& out,
                 std::ostream& err)
{
  const Source s = load_source(o);
  require_valid(s.net);
  const InputAssignment inputs = resolve_inputs(o, s);
  IntegrationConfig cfg;
  cfg.rel_tol = o.rel_tol;
  cfg.abs_tol = o.abs_tol;
  cfg.t_end = o.t_end ? *o.t_end : auto_horizon(s.net);
  cfg.samples = o.samples ? o.samples : 1000;
  const SimTrace trace = simulate(s.net, inputs, resolve_init(o), cfg);
  for (const auto& d : trace.diagnostics) {
    err << "warning: " << d << '\n';
  }
  std::ostringstream csv;
  write_trace_csv(csv, trace);
  write_artifacts(o, s, inputs, argv, {{"trace.csv", csv.str()}});

  out << "t_end " << format_double(trace.times.back()) << '\n';
  out << "gene,rna,protein\n";
  for (std::size_t i = 0; i < trace.genes.size(); ++i) {
    out << trace.genes[i] << ',' << format_double(trace.rna[i].back()) << ','
        << format_double(trace.protein[i].back()) << '\n';
  }
  return kSuccess;
}

int cmd_stability(const Options& o, const std::vector<std::string>& argv, std::ostream& out)
{
  const Source s = load_source(o);
  require_valid(s.net);
  const InputAssignment inputs = resolve_inputs(o, s);
  StabilityConfig cfg;
  if (o.mode == "analytic") {
    cfg.source = TraceSource::analytic;
  } else if (o.mode == "coupled") {
    cfg.source = TraceSource::coupled;
  } else {
    throw UsageError("--mode must be analytic or coupled");
  }
  cfg.band = o.epsilon;
  cfg.t_end = o.t_end ? *o.t_end : auto_horizon(s.net);
  if (cfg.t_end <= 0.0) {
    throw InvalidArgument("stability analysis needs t_end > 0");
  }
  if (o.samples) {
    cfg.samples = o.samples;
  }
  cfg.rel_tol = std::min(o.rel_tol, cfg.rel_tol);
  cfg.abs_tol = std::min(o.abs_tol, cfg.abs_tol);
  const StabilityReport report = analyze_network(s.net, inputs, cfg);

  std::vector<Artifact> files;
  std::ostringstream summary;
  write_stability_summary_csv(summary, report);
  files.push_back({"summary.csv", summary.str()});
  for (const auto& g : report.genes) {
    std::ostringstream csv;
    write_lyapunov_csv(csv, g);
    files.push_back({"lyapunov_" + safe_name(g.gene) + ".csv", csv.str()});
  }
  write_artifacts(o, s, inputs, argv, std::move(files));

  out << summary.str();
  out << "network_stabilization_time "
      << (report.network_stabilization_time ? format_double(*report.network_stabilization_time)
                                            : "not_reached")
      << '\n';
  return kSuccess;
}

std::pair<Axis, Axis> resolve_axes(const Options& o, const Source& s)
{
  const auto default_axis = [&](std::size_t which) {
    Axis a;
    if (s.builtin) {
      const AxisPreset& p = which == 0 ? s.builtin->x_axis : s.builtin->y_axis;
      a.input = p.input;
      a.lo = p.lo;
      a.hi = p.hi;
      return a;
    }
    if (s.net.inputs.size() <= which) {
      throw InvalidArgument("classification needs at least two inputs");
    }
    a.input = s.net.inputs[which];
    double k_max = 0.0;
    for (const auto& e : s.net.edges) {
      if (e.source == a.input) {
        k_max = std::max(k_max, e.k_half);
      }
    }
    a.lo = 0.0;
    a.hi = k_max > 0.0 ? 10.0 * k_max : 1.0;
    return a;
  };
  Axis x = default_axis(0);
  Axis y = default_axis(1);

  if (!o.range.empty()) {
    const auto parts = split(o.range, ',');
    if (parts.size() != 2) {
      throw UsageError("--range expects <x>:<lo>:<hi>,<y>:<lo>:<hi>");
    }
    for (std::size_t k = 0; k < 2; ++k) {
      const auto fields = split(parts[k], ':');
      if (fields.size() != 3) {
        throw UsageError("--range expects <x>:<lo>:<hi>,<y>:<lo>:<hi>");
      }
      Axis& a = k == 0 ? x : y;
      const std::string& name = fields[0];
      const bool placeholder = (name == "x" || name == "y") && !s.net.is_input(name);
      if (!placeholder) {
        a.input = name;
      }
      a.lo = parse_number(fields[1], "range bound");
      a.hi = parse_number(fields[2], "range bound");
    }
  }
  const auto dims = split(o.grid, 'x');
  if (dims.size() != 2) {
    throw UsageError("--grid expects <nx>x<ny>");
  }
  x.samples = parse_count(dims[0], "grid size");
  y.samples = parse_count(dims[1], "grid size");
  for (const Axis* a : {&x, &y}) {
    if (!s.net.is_input(a->input)) {
      throw InvalidArgument("axis '" + a->input + "' is not an input of the network");
    }
  }
  return {x, y};
}

int cmd_classify(const Options& o, const std::vector<std::string>& argv, std::ostream& out)
{
  const Source s = load_source(o);
  require_valid(s.net);
  const InputAssignment inputs = resolve_inputs(o, s);
  SweepConfig cfg;
  std::tie(cfg.x, cfg.y) = resolve_axes(o, s);
  cfg.fixed = inputs;
  cfg.threshold = o.threshold;
  if (o.scale == "normalized") {
    cfg.scale = OutputScale::normalized;
  } else if (o.scale == "raw") {
    cfg.scale = OutputScale::raw;
  } else {
    throw UsageError("--scale must be normalized or raw");
  }
  const ClassificationGrid grid = sweep(s.net, cfg);

  std::vector<Artifact> files;
  std::ostringstream csv;
  write_grid_csv(csv, grid);
  files.push_back({"grid.csv", csv.str()});
  std::vector<RegionMetrics> metrics;
  for (const auto& gene : grid.genes) {
    metrics.push_back(extract_boundary(grid, gene));
    std::ostringstream pgm;
    write_mask_pgm(pgm, grid, gene);
    files.push_back({"mask_" + safe_name(gene) + ".pgm", pgm.str()});
    std::ostringstream json;
    write_metrics_json(json, metrics.back());
    files.push_back({"metrics_" + safe_name(gene) + ".json", json.str()});
  }
  write_artifacts(o, s, inputs, argv, std::move(files));

  for (const auto& m : metrics) {
    if (std::find(s.net.outputs.begin(), s.net.outputs.end(), m.gene) != s.net.outputs.end()) {
      out << m.gene << " area_fraction " << format_double(m.area_fraction) << '\n';
    }
  }
  return kSuccess;
}

int dispatch(const Options& o, const std::vector<std::string>& argv, std::ostream& out,
             std::ostream& err)
{
  if (o.command == "validate") return cmd_validate(o, out);
  if (o.command == "steady-state") return cmd_steady_state(o, argv, out);
  if (o.command == "simulate") return cmd_simulate(o, argv, out, err);
  if (o.command == "stability") return cmd_stability(o, argv, out);
  if (o.command == "classify") return cmd_classify(o, argv, out);
  throw UsageError("unknown command '" + o.command + "'");
}

Options load_manifest(const std::string& path, const std::string& out_dir)
{
  std::ifstream in(path);
  if (!in) {
    throw IoError("cannot read manifest '" + path + "'");
  }
  Json manifest;
  try {
    manifest = Json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("manifest '" + path + "' is not valid JSON: " + e.what());
  }
  try {
    Options o = from_json(manifest.at("options"));
    o.embedded_spec = manifest.at("resolved_spec").dump();
    o.overrides.clear();
    o.out = out_dir;
    return o;
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument("manifest '" + path + "' is incomplete: " + e.what());
  }
}

void add_source_options(CLI::App* cmd, Options& o)
{
  cmd->add_option("spec_file", o.spec_path, "Network spec file (same as --spec)");
  cmd->add_option("--spec", o.spec_path, "Network spec file (JSON)");
  cmd->add_option("--builtin", o.builtin, "Built-in network: multilayer, random_structured, ecoli");
  cmd->add_option("--param-set", o.param_set, "Parameter set of a built-in network");
  cmd->add_option("--set", o.overrides, "Override gene.param=value (k1 k2 d1 d2 copy_number hill_n k_half)");
}

void add_run_options(CLI::App* cmd, Options& o)
{
  add_source_options(cmd, o);
  cmd->add_option("--input", o.inputs, "Input concentration id=value");
  cmd->add_option("--out", o.out, "Output directory for artifacts and manifest");
}

} // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err)
{
  Options o;
  double t_end = 0.0;
  std::string manifest_path;

  CLI::App app{"Gene regulatory neural network simulator", kToolName};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  auto* validate_cmd = app.add_subcommand("validate", "Check a network spec");
  add_source_options(validate_cmd, o);

  auto* steady_cmd = app.add_subcommand("steady-state", "Steady state of every gene");
  add_run_options(steady_cmd, o);

  auto* simulate_cmd = app.add_subcommand("simulate", "Integrate the coupled network");
  add_run_options(simulate_cmd, o);
  simulate_cmd->add_option("--init", o.init, "Initial state gene=rna:protein");

  auto* stability_cmd = app.add_subcommand("stability", "Eigenvalues and Lyapunov traces");
  add_run_options(stability_cmd, o);
  stability_cmd->add_option("--mode", o.mode, "analytic or coupled");
  stability_cmd->add_option("--epsilon", o.epsilon, "Stabilization band as a fraction of peak |dV/dt|");

  auto* classify_cmd = app.add_subcommand("classify", "Sweep two inputs and threshold outputs");
  add_run_options(classify_cmd, o);
  classify_cmd->add_option("--grid", o.grid, "Grid size <nx>x<ny>");
  classify_cmd->add_option("--range", o.range, "Axes <x>:<lo>:<hi>,<y>:<lo>:<hi>");
  classify_cmd->add_option("--threshold", o.threshold, "Classification threshold");
  classify_cmd->add_option("--scale", o.scale, "normalized or raw");

  std::vector<CLI::Option*> t_end_opts;
  for (auto* cmd : {simulate_cmd, stability_cmd}) {
    t_end_opts.push_back(cmd->add_option("--t-end", t_end, "Simulated horizon in seconds"));
    cmd->add_option("--rel-tol", o.rel_tol, "Relative tolerance");
    cmd->add_option("--abs-tol", o.abs_tol, "Absolute tolerance");
    cmd->add_option("--samples", o.samples, "Number of output samples");
  }

  auto* replay_cmd = app.add_subcommand("replay", "Re-run the command recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path, "manifest.json of an earlier run")->required();
  replay_cmd->add_option("--out", o.out, "Output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kSuccess : kUsageError;
  }

  try {
    if (replay_cmd->parsed()) {
      const Options replayed = load_manifest(manifest_path, o.out);
      return dispatch(replayed, args, out, err);
    }
    for (auto* cmd : app.get_subcommands()) {
      o.command = cmd->get_name();
    }
    for (auto* opt : t_end_opts) {
      if (opt->count() > 0) {
        o.t_end = t_end;
      }
    }
    return dispatch(o, args, out, err);
  } catch (const UsageError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const IntegrationFailure& e) {
    err << "error: " << e.what() << " (last good time " << format_double(e.last_good_time())
        << ")\n";
    return kDomainError;
  } catch (const SpecSyntaxError& e) {
    err << "error: " << e.what() << " at line " << e.line() << ", column " << e.column() << '\n';
    return kDomainError;
  } catch (const SpecSchemaError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::invalid_argument& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::logic_error& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  } catch (const std::runtime_error& e) {
    err << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kDomainError;
  }
}

int run(int argc, char** argv)
{
  std::vector<std::string> args(argv + 1, argv + argc);
  return run(args, std::cout, std::cerr);
}

} // namespace grnn::cli

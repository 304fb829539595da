#include "cubic/cli.hpp"

#include "cubic/exponents.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace cubic::cli {

Json RunConfig::to_json() const {
  Json j;
  j["command"] = command;
  if (!experiment.empty()) j["experiment"] = experiment;
  j["fields"] = fields;
  j["N"] = N ? Json(*N) : Json(nullptr);
  j["table"] = table ? Json(*table) : Json(nullptr);
  auto opt = [](const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); };
  j["X"] = opt(X);
  j["Y"] = opt(Y);
  j["T"] = opt(T);
  j["y"] = opt(y);
  j["Ts"] = Ts;
  j["ys"] = ys;
  j["samples"] = samples;
  j["rho_method"] = rho_method;
  j["normalization"] = normalization;
  j["seed"] = seed;
  j["l"] = l;
  j["q"] = q;
  if (!expr.empty()) {
    j["expr"] = expr;
    j["balance_var"] = balance_var;
    j["lo"] = lo;
    j["hi"] = hi;
    j["cone"] = cone;
  }
  return j;
}

FieldData prepare_field(const RunConfig& cfg, const std::string& field_name, std::uint64_t N, bool with_rho) {
  FieldData fd;
  if (cfg.table) {
    fd.tables = read_table(*cfg.table);
    const std::string name = field_name.empty() ? fd.tables.field_name : field_name;
    fd.field = load_field(name);
    if (fd.field.name != fd.tables.field_name) {
      throw ConfigError("table " + *cfg.table + " holds field '" + fd.tables.field_name + "', not '" + fd.field.name +
                        "'");
    }
    if (fd.tables.N < kMinN) throw PreconditionError("table N=" + std::to_string(fd.tables.N) + " is below 1000");
    if (fd.tables.N < N && cfg.N) {
      throw PreconditionError("table N=" + std::to_string(fd.tables.N) + " is smaller than N=" + std::to_string(N));
    }
  } else {
    if (N < kMinN) throw PreconditionError("N=" + std::to_string(N) + " is below the minimum 1000");
    fd.field = load_field(field_name);
    fd.tables = build_tables(fd.field, N, cfg.parallelism());
  }
  if (with_rho) fd.rho = checked_rho(fd.tables, fd.tables.N, parse_rho_method(cfg.rho_method));
  return fd;
}

namespace {

void add_common(CLI::App& sub, RunConfig& cfg) {
  sub.add_option("--field", cfg.fields, "Preset name or field config path (repeatable)");
  sub.add_option("--N", cfg.N, "Table size (>= 1000)");
  sub.add_option("--table", cfg.table, "Load tables from a file written by sieve");
  sub.add_option("--rho-method", cfg.rho_method, "series_b_over_m or regression_on_A");
  sub.add_option("--output", cfg.output, "Output path ('-' for stdout)");
  sub.add_option("--format", cfg.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  sub.add_option("--seed", cfg.seed, "Seed for randomized checks");
  sub.add_option("--threads", cfg.threads, "Worker threads (0 = auto)");
}

void write_sieve_summary(const FieldData& fd, const std::string& path, const RunConfig& cfg, std::ostream& out) {
  const auto& t = fd.tables;
  const std::uint64_t k = std::min<std::uint64_t>(20, t.N);
  Json first = Json::object();
  for (const auto* arr : {&t.aK, &t.muK, &t.b}) {
    const char* key = arr == &t.aK ? "aK" : (arr == &t.muK ? "muK" : "b");
    first[key] = std::vector<std::int32_t>(arr->begin() + 1, arr->begin() + static_cast<std::ptrdiff_t>(k) + 1);
  }
  const auto s = estimate_rho(t, t.N, RhoMethod::series_b_over_m);
  const auto g = estimate_rho(t, t.N, RhoMethod::regression_on_A);
  if (cfg.format == "json") {
    Json j;
    j["field"] = fd.field.name;
    j["N"] = t.N;
    j["table"] = path;
    j["config_hash"] = sha1_hex(cfg.to_json().dump());
    j["config"] = cfg.to_json();
    j["first"] = first;
    j["rho"] = Json::array({rho_to_json(s), rho_to_json(g)});
    out << j.dump(2) << '\n';
    return;
  }
  out << "field " << fd.field.name << ", N = " << t.N << ", table written to " << path << '\n';
  for (const auto& [key, vals] : first.items()) {
    out << key << "(1.." << k << "):";
    for (const auto& v : vals) out << ' ' << v.get<std::int64_t>();
    out << '\n';
  }
  out.precision(12);
  out << "rho (series_b_over_m) = " << s.value << " +/- " << s.std_error << '\n';
  out << "rho (regression_on_A) = " << g.value << " +/- " << g.std_error << '\n';
}

int cmd_sieve(const RunConfig& cfg, std::ostream& out) {
  if (cfg.fields.size() > 1) throw ConfigError("sieve takes a single --field");
  RunConfig c = cfg;
  c.table.reset();
  const std::string name = cfg.fields.empty() ? "cubic-nonnormal-2" : cfg.fields.front();
  const std::uint64_t N = cfg.N.value_or(kDefaultN);
  const FieldData fd = prepare_field(c, name, N, false);
  const std::string path = cfg.output.value_or(fd.field.name + "-N" + std::to_string(N) + ".tbl");
  write_table(fd.tables, path);
  write_sieve_summary(fd, path, cfg, out);
  return kExitOk;
}

template <typename Write>
void emit(const std::optional<std::string>& path, std::ostream& out, Write write) {
  if (!path) return;
  if (*path == "-") {
    write(out);
    return;
  }
  std::ofstream f(*path, std::ios::binary);
  if (!f) throw ConfigError("cannot open output file " + *path);
  write(f);
  if (!f) throw ConfigError("failed writing " + *path);
}

int cmd_verify(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const auto results = run_verify(cfg, out);
  emit(cfg.output, out, [&](std::ostream& o) {
    if (cfg.format == "json") {
      Json rows = Json::array();
      for (const auto& r : results) {
        rows.push_back({{"check", r.check}, {"field", r.field}, {"status", r.status}, {"detail", r.detail}});
      }
      o << Json{{"config_hash", sha1_hex(cfg.to_json().dump())}, {"config", cfg.to_json()}, {"checks", rows}}.dump(2)
        << '\n';
      return;
    }
    ExperimentReport r;
    r.experiment = "verify";
    r.config = cfg.to_json();
    r.config_hash = sha1_hex(r.config.dump());
    r.columns = {"check", "field", "status", "detail"};
    for (const auto& c : results) r.add_row({c.check, c.field, c.status, c.detail});
    write_csv(r, o);
  });
  for (const auto& r : results) {
    if (r.status == "fail") {
      err << "verify failed: " << r.detail << '\n';
      return kExitCheckFailed;
    }
  }
  out << "all exact checks passed\n";
  return kExitOk;
}

int cmd_experiment(const RunConfig& cfg, std::ostream& out) {
  const auto report = run_experiment(cfg);
  for (const auto& line : report.headline) out << line << '\n';
  emit(cfg.output, out, [&](std::ostream& o) {
    if (cfg.format == "json") {
      o << to_json(report).dump(2) << '\n';
    } else {
      write_csv(report, o);
    }
  });
  return kExitOk;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Ramanujan sums over cubic fields: sieve tables, verify identities, run experiments"};
  app.name("cubic_ramanujan");
  app.require_subcommand(1);
  RunConfig cfg;

  auto* sieve = app.add_subcommand("sieve", "Build a_K, mu_K, b tables and write them to a binary file");
  add_common(*sieve, cfg);

  auto* verify = app.add_subcommand("verify", "Run the exact-identity suite (exit 1 on any failure)");
  add_common(*verify, cfg);

  auto* experiment = app.add_subcommand("experiment", "Run one report-only experiment");
  add_common(*experiment, cfg);
  std::string names;
  for (const auto& n : experiment_names()) names += (names.empty() ? "" : ", ") + n;
  experiment->add_option("name", cfg.experiment, "One of: " + names)->required();
  experiment->add_option("--X", cfg.X, "X (sum over ideals of norm <= X)");
  experiment->add_option("--Y", cfg.Y, "Y");
  experiment->add_option("--T", cfg.T, "T (integration range [T, 2T])");
  experiment->add_option("--y", cfg.y, "Voronoi truncation point");
  experiment->add_option("--Ts", cfg.Ts, "List of T (or x) values")->delimiter(',');
  experiment->add_option("--ys", cfg.ys, "List of truncation points")->delimiter(',');
  experiment->add_option("--samples", cfg.samples, "Quadrature panels (>= 33)");
  experiment->add_option("--normalization", cfg.normalization, "Voronoi scaling: field_scaled or literal");
  experiment->add_option("--l", cfg.l, "Divisor function order for lemma6");
  experiment->add_option("--q", cfg.q, "Moment for lemma6");
  experiment->add_option("--expr", cfg.expr, "Bound expression for balance");
  experiment->add_option("--balance-var", cfg.balance_var, "Variable to eliminate");
  experiment->add_option("--lo", cfg.lo, "Lower end of the balanced variable (monomial)");
  experiment->add_option("--hi", cfg.hi, "Upper end of the balanced variable (monomial)");
  experiment->add_option("--cone", cfg.cone, "Variable relations, e.g. \"T >= X, X >= 1\"");

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  }

  try {
    if (sieve->parsed()) {
      cfg.command = "sieve";
      return cmd_sieve(cfg, out);
    }
    if (verify->parsed()) {
      cfg.command = "verify";
      return cmd_verify(cfg, out, err);
    }
    cfg.command = "experiment";
    return cmd_experiment(cfg, out);
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const PreconditionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const exponents::ExprError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const TableFormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitBadConfig;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitCheckFailed;
  }
}

}  // namespace cubic::cli

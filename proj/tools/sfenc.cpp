// sfenc: command-line front end for the SF -> TRS -> lambda workbench.
//
// Exit codes: 0 pass, 1 property failure, 2 out of fuel, 3 usage or parse
// error. SFENC_FUEL replaces the default of every --fuel option.
#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <iterator>
#include <sstream>
#include <string>

#include "sfenc/encoder.hpp"
#include "sfenc/error.hpp"
#include "sfenc/workbench.hpp"

namespace {

using namespace sfenc;
using J = nlohmann::ordered_json;

constexpr int kUsage = 3;

struct Common {
  std::string format = "text";
  bool json() const { return format == "json"; }
};

std::size_t default_fuel(std::size_t fallback) {
  if (const char* env = std::getenv("SFENC_FUEL")) {
    try {
      std::size_t pos = 0;
      unsigned long long v = std::stoull(env, &pos);
      if (pos == std::string(env).size() && v > 0) return static_cast<std::size_t>(v);
    } catch (const std::exception&) {
    }
    std::cerr << "sfenc: ignoring malformed SFENC_FUEL=" << env << "\n";
  }
  return fallback;
}

std::string read_arg(const std::string& text) {
  if (text != "-") return text;
  return std::string(std::istreambuf_iterator<char>(std::cin), {});
}

trs::System load_system(const std::string& path) {
  if (path.empty() || path == "sf") return trs::sf_applicative_system();
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return trs::parse_system(buf.str());
}

void emit(const J& line) { std::cout << line.dump() << '\n'; }

int finish(const wb::RunReport& report, const Common& common) {
  if (common.json()) {
    for (const auto& item : report.items) emit(J{{"item", item}});
    J summary = report.to_json();
    summary.erase("items");
    emit(summary);
  } else {
    std::cout << report.command << ": " << wb::to_string(report.outcome) << "\n";
    for (const auto& [k, v] : report.stats.items()) std::cout << "  " << k << ": " << v.dump() << "\n";
    for (const auto& item : report.items) {
      auto status = item.contains("status") ? item["status"] : item.value("verdict", J("?"));
      if (status != "pass" && status != "sn" && status != "skipped") std::cout << "  " << item.dump() << "\n";
    }
  }
  return wb::exit_code(report.outcome);
}

// -- reduce ---------------------------------------------------------------------------

void print_step(const Common& common, std::size_t i, const std::string& layer, const nlohmann::json& step) {
  if (common.json()) {
    J line{{"layer", layer}, {"step", i}};
    J fields = J::parse(step.dump());  // keep the field order of the layer's own schema
    for (auto it = fields.begin(); it != fields.end(); ++it) line[it.key()] = *it;
    emit(line);
  } else {
    std::cout << i + 1 << ": " << step["after"].get<std::string>() << "\n";
  }
}

int print_result(const Common& common, const std::string& layer, const std::string& term, bool normal,
                 std::size_t steps) {
  if (common.json()) {
    emit(J{{"layer", layer}, {"result", term}, {"normal", normal}, {"steps", steps}});
  } else if (normal) {
    std::cout << "normal form after " << steps << " step(s): " << term << "\n";
  } else {
    std::cout << "fuel exhausted after " << steps << " step(s): " << term << "\n";
  }
  return normal ? 0 : 2;
}

int run_reduce(const Common& common, const std::string& layer, const std::string& text, std::size_t fuel,
               const std::string& system_path, bool innermost) {
  std::string input = read_arg(text);
  if (layer == "sf") {
    auto r = sf::normalize(sf::parse_term(input), fuel,
                           innermost ? sf::Strategy::LeftmostInnermost : sf::Strategy::LeftmostOutermost);
    for (std::size_t i = 0; i < r.trace.steps.size(); ++i) print_step(common, i, layer, sf::step_to_json(r.trace.steps[i]));
    return print_result(common, layer, sf::to_string(r.term), r.normal, r.steps());
  }
  if (layer == "trs") {
    trs::System sys = load_system(system_path);
    auto r = trs::normalize(sys, trs::parse_term(sys.signature, input), fuel,
                            innermost ? trs::Strategy::LeftmostInnermost : trs::Strategy::LeftmostOutermost);
    for (std::size_t i = 0; i < r.trace.steps.size(); ++i) print_step(common, i, layer, trs::step_to_json(r.trace.steps[i]));
    return print_result(common, layer, trs::to_string(r.term), r.normal, r.steps());
  }
  if (innermost) throw CLI::ValidationError("--innermost", "lambda reduction is normal order only");
  auto r = lam::normalize_beta(lam::parse_term(input), fuel, true);
  for (std::size_t i = 0; i < r.trace.size(); ++i) print_step(common, i, layer, lam::step_to_json(r.trace[i]));
  return print_result(common, layer, lam::to_string(r.term), r.normal, r.steps);
}

// -- trace --------------------------------------------------------------------------------

int run_trace(const Common& common, const std::string& text, std::size_t fuel, std::size_t beta_fuel) {
  auto trace = wb::run_pipeline_trace(sf::parse_term(read_arg(text)), {fuel, beta_fuel});
  auto lines = wb::to_json_lines(trace);
  if (common.json()) {
    for (const auto& l : lines) emit(l);
  } else {
    for (const auto& l : lines) {
      if (l.contains("result")) {
        std::cout << l["layer"].get<std::string>() << (l.contains("source") ? " [" + l["source"].get<std::string>() + "]" : "")
                  << ": " << (l["normal"].get<bool>() ? "normal" : "fuel exhausted") << " after "
                  << l["steps"].dump() << " step(s)" << (l.contains("result") ? ": " + l["result"].get<std::string>() : "")
                  << "\n";
      } else if (l["layer"] == "sf") {
        std::cout << "sf " << l["step"].dump() << ": " << l["after"].get<std::string>() << "\n";
      } else {
        std::cout << "  trs " << l["step"].dump() << ": " << l["after"].get<std::string>() << "\n";
      }
    }
  }
  bool normal = trace.sf.normal && trace.trs.normal;
  for (const auto& c : trace.lambda) normal = normal && c.normal;
  return normal ? 0 : 2;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"SF-calculus to lambda-calculus encoding workbench"};
  app.require_subcommand(1);
  app.fallthrough();
  Common common;
  app.add_option("--format", common.format, "Output format")
      ->check(CLI::IsMember({"text", "json"}))
      ->capture_default_str();

  const std::size_t rewrite_fuel = default_fuel(wb::kDefaultRewriteFuel);
  const std::size_t beta_fuel_default = default_fuel(wb::kDefaultBetaFuel);

  // reduce
  auto* reduce = app.add_subcommand("reduce", "Normalize a term in one layer");
  std::string layer, term, system_path;
  std::size_t fuel = 0;
  bool innermost = false;
  reduce->add_option("layer", layer, "sf, trs or lambda")->required()->check(CLI::IsMember({"sf", "trs", "lambda"}));
  reduce->add_option("term", term, "Term text, or - for stdin")->required();
  reduce->add_option("--fuel", fuel, "Step budget (default 10000 rewrite, 100000 beta)");
  reduce->add_option("--system", system_path, "Rewrite system file for the trs layer (default: SF rules)");
  reduce->add_flag("--innermost", innermost, "Leftmost-innermost instead of leftmost-outermost");

  // translate / encode
  auto* translate = app.add_subcommand("translate", "Translate an SF term into the applicative TRS");
  std::string translate_term;
  translate->add_option("term", translate_term)->required();

  auto* encode = app.add_subcommand("encode", "Encode an SF term as a lambda term, or list a representation");
  std::string encode_term;
  bool representation = false;
  encode->add_option("term", encode_term);
  encode->add_flag("--representation", representation, "Print the canonical representation instead");
  encode->add_option("--system", system_path, "System whose representation to list (default: SF rules)");

  // trace
  auto* trace = app.add_subcommand("trace", "Aligned SF, TRS and lambda traces of an SF term");
  std::string trace_term;
  std::size_t trace_fuel = rewrite_fuel, trace_beta = beta_fuel_default;
  trace->add_option("term", trace_term)->required();
  trace->add_option("--fuel", trace_fuel, "SF and TRS step budget")->capture_default_str();
  trace->add_option("--beta-fuel", trace_beta, "Beta step budget")->capture_default_str();

  // verify
  auto* verify = app.add_subcommand("verify", "Check that the canonical representation solves every rule");
  std::size_t verify_fuel = beta_fuel_default;
  verify->add_option("--system", system_path, "Rewrite system file (default: SF rules)");
  verify->add_option("--fuel", verify_fuel, "Beta step budget per side")->capture_default_str();

  // gen
  auto* gen = app.add_subcommand("gen", "Seeded random SF terms");
  std::uint64_t seed = 0;
  std::size_t size = 8, count = 1;
  bool normal_only = false;
  gen->add_option("--seed", seed)->capture_default_str();
  gen->add_option("--size", size, "Atoms per term")->capture_default_str()->check(CLI::PositiveNumber);
  gen->add_option("--count", count)->capture_default_str();
  gen->add_flag("--normal", normal_only, "Generate normal forms");

  // check-sim
  auto* sim = app.add_subcommand("check-sim", "Simulation check over seeded terms");
  wb::SimOptions sim_opts;
  sim_opts.sf_fuel = rewrite_fuel;
  sim_opts.beta_fuel = beta_fuel_default;
  sim->add_option("--seed", sim_opts.seed)->capture_default_str();
  sim->add_option("--count", sim_opts.count)->capture_default_str();
  sim->add_option("--size", sim_opts.max_size, "Maximum atoms per term")->capture_default_str()->check(CLI::PositiveNumber);
  sim->add_option("--fuel", sim_opts.sf_fuel, "SF step budget; terms needing more are skipped")->capture_default_str();
  sim->add_option("--beta-fuel", sim_opts.beta_fuel)->capture_default_str();
  sim->add_option("--threads", sim_opts.threads, "0: one per core")->capture_default_str();

  // check-sn
  auto* sn = app.add_subcommand("check-sn", "Strong normalisation of encoded SF normal forms");
  wb::SnOptions sn_opts;
  sn_opts.budget = default_fuel(wb::kDefaultSnBudget);
  std::string method = "auto";
  sn->add_option("--size", sn_opts.max_size, "Maximum atoms per normal form")->capture_default_str();
  sn->add_option("--fuel,--budget", sn_opts.budget, "Search budget per term")->capture_default_str();
  sn->add_option("--method", method)->check(CLI::IsMember({"auto", "derivation", "exhaustive"}))->capture_default_str();
  sn->add_option("--threads", sn_opts.threads)->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    if (*reduce) {
      if (fuel == 0) fuel = layer == "lambda" ? beta_fuel_default : rewrite_fuel;
      return run_reduce(common, layer, term, fuel, system_path, innermost);
    }
    if (*translate) {
      sf::Term m = sf::parse_term(read_arg(translate_term));
      std::string out = trs::to_string(trs::translate_sf(m));
      if (common.json()) {
        emit(J{{"sf", sf::to_string(m)}, {"trs", out}});
      } else {
        std::cout << out << "\n";
      }
      return 0;
    }
    if (*encode) {
      if (representation) {
        auto built = enc::build_canonical_representation(load_system(system_path));
        if (common.json()) {
          std::cout << enc::to_json(built.rep).dump(2) << "\n";
        } else {
          std::cout << enc::to_listing(built.rep);
        }
        return 0;
      }
      if (encode_term.empty()) throw CLI::RequiredError("term");
      sf::Term m = sf::parse_term(read_arg(encode_term));
      std::string out = lam::to_string(enc::encode_sf(m));
      if (common.json()) {
        emit(J{{"sf", sf::to_string(m)}, {"lambda", out}});
      } else {
        std::cout << out << "\n";
      }
      return 0;
    }
    if (*trace) return run_trace(common, trace_term, trace_fuel, trace_beta);
    if (*verify) return finish(wb::verify_report(load_system(system_path), verify_fuel), common);
    if (*gen) {
      for (std::size_t i = 0; i < count; ++i) {
        std::uint64_t s = count == 1 ? seed : wb::derive_seed(seed, i);
        sf::Term t = normal_only ? wb::gen_sf_normal(s, size) : wb::gen_sf(s, size);
        if (common.json()) {
          emit(J{{"index", i}, {"seed", s}, {"term", sf::to_string(t)}});
        } else {
          std::cout << sf::to_string(t) << "\n";
        }
      }
      return 0;
    }
    if (*sim) return finish(wb::check_sim(sim_opts), common);
    if (*sn) {
      sn_opts.method = method == "derivation"   ? lam::SnMethod::Derivation
                       : method == "exhaustive" ? lam::SnMethod::Exhaustive
                                                : lam::SnMethod::Auto;
      return finish(wb::check_sn(sn_opts), common);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "sfenc: " << e.what() << "\n";
    return kUsage;
  } catch (const SyntaxError& e) {
    std::cerr << "sfenc: syntax error: " << e.what() << "\n";
    return kUsage;
  } catch (const NotCanonical& e) {
    std::cerr << "sfenc: " << e.what() << "\n";
    return kUsage;
  } catch (const MismatchError& e) {
    std::cerr << "sfenc: layers disagree: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "sfenc: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

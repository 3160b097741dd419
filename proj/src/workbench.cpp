#include "sfenc/workbench.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <limits>
#include <mutex>
#include <optional>
#include <random>
#include <stdexcept>
#include <thread>

#include "sfenc/error.hpp"
#include "sfenc/sn.hpp"

namespace sfenc::wb {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

namespace {

// std::uniform_int_distribution differs between standard libraries; this
// rejection sampler only relies on the engine, whose output is specified.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % n;
  while (true) {
    std::uint64_t r = rng();
    if (r < limit) return r % n;
  }
}

sf::Term random_atom(std::mt19937_64& rng) { return (rng() >> 63) ? sf::Term::f() : sf::Term::s(); }

sf::Term random_normal(std::mt19937_64& rng, std::size_t size) {
  sf::Term head = random_atom(rng);
  if (size == 1) return head;
  // Shapes: one argument, or two arguments split (a, size - 1 - a).
  std::uint64_t shapes = size >= 3 ? size - 1 : 1;
  std::uint64_t pick = bounded(rng, shapes);
  if (pick == 0) return head(random_normal(rng, size - 1));
  sf::Term a = random_normal(rng, pick);
  return head(a)(random_normal(rng, size - 1 - pick));
}

template <class Result>
std::vector<Result> parallel_map(std::size_t count, unsigned threads, const std::function<Result(std::size_t)>& job) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::vector<std::optional<Result>> slots(count);
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        slots[i] = job(i);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
  std::vector<Result> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

}  // namespace

sf::Term gen_sf(std::uint64_t seed, std::size_t size) {
  if (size == 0) throw std::invalid_argument("size must be at least 1");
  std::mt19937_64 rng(seed);
  // Node 0 is the first leaf; every insertion adds one internal node and one leaf.
  struct Node {
    long parent = -1, left = -1, right = -1;
  };
  std::vector<Node> nodes(1);
  long root = 0;
  for (std::size_t k = 0; k + 1 < size; ++k) {
    std::uint64_t choice = bounded(rng, 2 * nodes.size());
    long x = static_cast<long>(choice / 2);
    bool new_leaf_left = choice % 2 == 1;
    long y = static_cast<long>(nodes.size());
    long z = y + 1;
    nodes.push_back({nodes[x].parent, new_leaf_left ? z : x, new_leaf_left ? x : z});
    nodes.push_back({y});
    long p = nodes[x].parent;
    if (p < 0) {
      root = y;
    } else if (nodes[p].left == x) {
      nodes[p].left = y;
    } else {
      nodes[p].right = y;
    }
    nodes[x].parent = y;
  }
  std::function<sf::Term(long)> build = [&](long n) -> sf::Term {
    if (nodes[n].left < 0) return random_atom(rng);
    sf::Term l = build(nodes[n].left);
    return sf::Term::app(l, build(nodes[n].right));
  };
  return build(root);
}

sf::Term gen_sf_normal(std::uint64_t seed, std::size_t size) {
  if (size == 0) throw std::invalid_argument("size must be at least 1");
  std::mt19937_64 rng(seed);
  return random_normal(rng, size);
}

std::vector<sf::Term> enumerate_sf_normal(std::size_t max_size) {
  // by_size[n]: normal forms with exactly n atoms.
  std::vector<std::vector<sf::Term>> by_size(max_size + 1);
  std::vector<sf::Term> out;
  for (std::size_t n = 1; n <= max_size; ++n) {
    for (sf::Term head : {sf::Term::s(), sf::Term::f()}) {
      if (n == 1) {
        by_size[n].push_back(head);
        continue;
      }
      for (const auto& a : by_size[n - 1]) by_size[n].push_back(head(a));
      for (std::size_t a = 1; a + 1 < n; ++a) {
        for (const auto& x : by_size[a]) {
          for (const auto& y : by_size[n - 1 - a]) by_size[n].push_back(head(x)(y));
        }
      }
    }
    out.insert(out.end(), by_size[n].begin(), by_size[n].end());
  }
  return out;
}

// -- pipeline -------------------------------------------------------------------

PipelineTrace run_pipeline_trace(const sf::Term& m, PipelineFuel fuel) {
  PipelineTrace out{sf::normalize(m, fuel.rewrite), {}, trs::normalize(trs::sf_applicative_system(),
                                                                        trs::translate_sf(m), fuel.rewrite),
                    {}};
  for (const auto& s : out.sf.trace.steps) out.segments.push_back(trs::simulate_sf_step(s.before, s.path));

  if (out.trs.normal) {
    auto back = trs::readback_sf(out.trs.term);
    if (!back) throw MismatchError("TRS normal form " + trs::to_string(out.trs.term) + " is not a translation");
    if (out.sf.normal && !(*back == out.sf.term)) {
      throw MismatchError("TRS normal form reads back as " + sf::to_string(*back) + ", SF normal form is " +
                          sf::to_string(out.sf.term));
    }
  }

  auto checkpoint = [&](const sf::Term& source) {
    auto r = lam::normalize_beta(enc::encode_sf(source), fuel.beta);
    LambdaCheckpoint c{source, r.steps, r.normal, std::nullopt};
    if (r.normal) c.normal_form = r.term;
    return c;
  };
  out.lambda.push_back(checkpoint(m));
  if (!out.sf.trace.steps.empty()) out.lambda.push_back(checkpoint(out.sf.term));
  const auto& first = out.lambda.front();
  const auto& last = out.lambda.back();
  if (first.normal && last.normal && !(*first.normal_form == *last.normal_form)) {
    throw MismatchError("encodings of " + sf::to_string(first.source) + " and " + sf::to_string(last.source) +
                        " have different normal forms");
  }
  return out;
}

std::vector<nlohmann::ordered_json> to_json_lines(const PipelineTrace& trace) {
  using J = nlohmann::ordered_json;
  std::vector<J> out;
  for (std::size_t i = 0; i < trace.sf.trace.steps.size(); ++i) {
    const auto& s = trace.sf.trace.steps[i];
    J path = J::array();
    for (sf::Dir d : s.path) path.push_back(d == sf::Dir::L ? "L" : "R");
    out.push_back(J{{"layer", "sf"},
                    {"step", i},
                    {"before", sf::to_string(s.before)},
                    {"path", path},
                    {"after", sf::to_string(s.after)}});
    for (std::size_t j = 0; j < trace.segments[i].steps.size(); ++j) {
      const auto& t = trace.segments[i].steps[j];
      out.push_back(J{{"layer", "trs"},
                      {"sf_step", i},
                      {"step", j},
                      {"before", trs::to_string(t.before)},
                      {"path", t.position},
                      {"after", trs::to_string(t.after)}});
    }
  }
  out.push_back(J{{"layer", "sf"},
                  {"result", sf::to_string(trace.sf.term)},
                  {"normal", trace.sf.normal},
                  {"steps", trace.sf.steps()}});
  std::size_t simulated = 0;
  for (const auto& s : trace.segments) simulated += s.steps.size();
  out.push_back(J{{"layer", "trs"},
                  {"result", trs::to_string(trace.trs.term)},
                  {"normal", trace.trs.normal},
                  {"steps", trace.trs.steps()},
                  {"simulation_steps", simulated}});
  for (const auto& c : trace.lambda) {
    J line{{"layer", "lambda"}, {"source", sf::to_string(c.source)}, {"normal", c.normal}, {"steps", c.steps}};
    if (c.normal_form) line["result"] = lam::to_string(*c.normal_form);
    out.push_back(line);
  }
  return out;
}

// -- reports ------------------------------------------------------------------------

std::string to_string(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return "pass";
    case Outcome::Fail:
      return "fail";
    case Outcome::Inconclusive:
      return "inconclusive";
  }
  return "?";
}

int exit_code(Outcome o) {
  switch (o) {
    case Outcome::Pass:
      return 0;
    case Outcome::Fail:
      return 1;
    case Outcome::Inconclusive:
      return 2;
  }
  return 1;
}

nlohmann::ordered_json RunReport::to_json() const {
  nlohmann::ordered_json items_json = nlohmann::ordered_json::array();
  for (const auto& i : items) items_json.push_back(i);
  return {{"command", command}, {"args", args}, {"outcome", to_string(outcome)}, {"stats", stats},
          {"items", items_json}};
}

namespace {

Outcome combine(bool failed, bool inconclusive) {
  return failed ? Outcome::Fail : inconclusive ? Outcome::Inconclusive : Outcome::Pass;
}

}  // namespace

RunReport check_sim(const SimOptions& opts) {
  if (opts.max_size == 0) throw std::invalid_argument("size must be at least 1");
  struct Item {
    nlohmann::ordered_json json;
    std::string status;
    std::size_t sf_steps = 0, trs_steps = 0, beta_steps = 0;
  };
  auto items = parallel_map<Item>(opts.count, opts.threads, [&](std::size_t i) {
    std::uint64_t seed = derive_seed(opts.seed, i);
    std::size_t size = 1 + derive_seed(seed, 0) % opts.max_size;
    sf::Term m = gen_sf(seed, size);
    Item item;
    item.json = {{"index", i}, {"term", sf::to_string(m)}};
    auto nf = sf::normalize(m, opts.sf_fuel);
    item.sf_steps = nf.steps();
    if (!nf.normal) {
      item.status = "skipped";
    } else {
      try {
        for (const auto& s : nf.trace.steps) item.trs_steps += trs::simulate_sf_step(s.before, s.path).steps.size();
        auto a = lam::normalize_beta(enc::encode_sf(m), opts.beta_fuel);
        auto b = lam::normalize_beta(enc::encode_sf(nf.term), opts.beta_fuel);
        item.beta_steps = a.steps + b.steps;
        if (!a.normal || !b.normal) {
          item.status = "inconclusive";
        } else {
          item.status = a.term == b.term ? "pass" : "mismatch";
        }
      } catch (const MismatchError& e) {
        item.status = "mismatch";
        item.json["error"] = e.what();
      }
      item.json["normal_form"] = sf::to_string(nf.term);
    }
    item.json["status"] = item.status;
    item.json["sf_steps"] = item.sf_steps;
    item.json["trs_steps"] = item.trs_steps;
    item.json["beta_steps"] = item.beta_steps;
    return item;
  });

  RunReport report;
  report.command = "check-sim";
  report.args = {{"seed", opts.seed},
                 {"count", opts.count},
                 {"size", opts.max_size},
                 {"fuel", opts.sf_fuel},
                 {"beta_fuel", opts.beta_fuel}};
  std::size_t pass = 0, mismatch = 0, inconclusive = 0, skipped = 0, sf_steps = 0, trs_steps = 0, beta = 0;
  for (auto& item : items) {
    pass += item.status == "pass";
    mismatch += item.status == "mismatch";
    inconclusive += item.status == "inconclusive";
    skipped += item.status == "skipped";
    sf_steps += item.sf_steps;
    trs_steps += item.trs_steps;
    beta += item.beta_steps;
    report.items.push_back(std::move(item.json));
  }
  report.stats = {{"checked", pass + mismatch + inconclusive},
                  {"pass", pass},
                  {"mismatch", mismatch},
                  {"inconclusive", inconclusive},
                  {"skipped", skipped},
                  {"sf_steps", sf_steps},
                  {"trs_steps", trs_steps},
                  {"beta_steps", beta}};
  report.outcome = combine(mismatch > 0, inconclusive > 0);
  return report;
}

RunReport check_sn(const SnOptions& opts) {
  auto terms = enumerate_sf_normal(opts.max_size);
  auto items = parallel_map<nlohmann::ordered_json>(terms.size(), opts.threads, [&](std::size_t i) {
    auto verdict = lam::is_strongly_normalising(enc::encode_sf(terms[i]), opts.budget, opts.method);
    nlohmann::ordered_json item{{"term", sf::to_string(terms[i])}};
    if (auto* sn = std::get_if<lam::StronglyNormalising>(&verdict)) {
      item["status"] = "sn";
      item["longest_reduction"] = sn->longest_reduction;
    } else if (auto* cyc = std::get_if<lam::NotSN>(&verdict)) {
      item["status"] = "not_sn";
      item["cycle_length"] = cyc->cycle.size();
    } else {
      item["status"] = "unknown";
      item["fuel_spent"] = std::get<lam::Unknown>(verdict).fuel_spent;
    }
    return item;
  });
  RunReport report;
  report.command = "check-sn";
  report.args = {{"size", opts.max_size}, {"budget", opts.budget}};
  std::size_t sn = 0, not_sn = 0, unknown = 0;
  for (auto& item : items) {
    const auto& s = item["status"];
    sn += s == "sn";
    not_sn += s == "not_sn";
    unknown += s == "unknown";
    report.items.push_back(std::move(item));
  }
  report.stats = {{"terms", terms.size()}, {"sn", sn}, {"not_sn", not_sn}, {"unknown", unknown}};
  report.outcome = combine(not_sn > 0, unknown > 0);
  return report;
}

RunReport verify_report(const trs::System& sys, std::size_t fuel) {
  auto built = enc::build_canonical_representation(sys);
  auto result = enc::verify_solution(built.artifacts.system, built.rep, fuel);
  RunReport report;
  report.command = "verify";
  report.args = {{"fuel", fuel}};
  std::size_t counts[3] = {0, 0, 0};
  for (const auto& r : result.rules) {
    ++counts[static_cast<int>(r.verdict)];
    report.items.push_back({{"rule", r.rule + 1},
                            {"text", r.text},
                            {"verdict", enc::to_string(r.verdict)},
                            {"lhs_steps", r.lhs_steps},
                            {"rhs_steps", r.rhs_steps}});
  }
  report.stats = {{"rules", result.rules.size()}, {"pass", counts[0]}, {"fail", counts[1]}, {"inconclusive", counts[2]}};
  report.outcome = combine(counts[1] > 0, counts[2] > 0);
  return report;
}

}  // namespace sfenc::wb

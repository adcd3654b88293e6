// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <algorithm>
#include <cstdio>
#include <functional>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "stalloc/stalloc.hpp"

namespace stalloc::cli {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

/// Where each library operation can be exercised from the command line. The
/// example strings are real invocation prefixes; a coverage test appends
/// --help to each and expects a clean parse.
struct OperationBinding {
  const char* operation;
  const char* example;
};

inline constexpr OperationBinding kOperationRegistry[] = {
    {"validate_profile", "validate"},
    {"stable_allocation", "allocate"},
    {"uniform_hash_allocation", "allocate --priority 1,2,3"},
    {"shuffle_profile", "shuffle --sigma 2,1,3"},
    {"is_core_allocation", "allocate --check"},
    {"is_locally_optimal", "allocate --check"},
    {"priority_reconstruction", "reconstruct --goods 1,3,2"},
    {"pi_to_sigma", "bijection pi-to-sigma --perm 1,3,2"},
    {"sigma_to_pi", "bijection sigma-to-pi --perm 2,1,3"},
    {"is_consistent", "bijection check --pi 1,3,2 --sigma 2,1,3"},
    {"harmonic", "stats harmonic --n 3 --order 1"},
    {"q_exceed", "stats q-exceed --n 9 --k 9 --j 1"},
    {"weighted_q_sum", "stats weighted-q-sum --n 3 --k 3 --m 0"},
    {"expected_rank_poly", "stats poly --n 3"},
    {"expected_rank_sum", "stats rank-sum --n 3"},
    {"stirling_cycle", "stats stirling --n 4 --k 2"},
    {"rank_product_coeff", "stats product-coeff --n 2"},
    {"expected_square_poly", "stats square-poly --n 2"},
    {"expected_square_sum", "stats square-sum --n 2"},
    {"rank_sum_second_moment", "stats second-moment --n 2"},
    {"rank_sum_variance", "stats variance --n 2"},
    {"expected_rank_variance", "stats rank-variance --n 2"},
    {"max_rank_at_most", "stats max-rank-cdf --n 40 --m 20"},
    {"random_profile", "random --n 4 --seed 1"},
    {"exhaustive_rank_distribution", "enumerate --n 3"},
    {"monte_carlo_summary", "simulate --n 3 --samples 1000 --seed 1"},
    {"gale_shapley_male_optimal", "marriage run --girls cyclic --n 3 --boys-seed 1"},
    {"cyclic_girls", "marriage total --girls cyclic --n 3"},
    {"total_marriage_rank_sum", "marriage total --girls cyclic --n 3"},
    {"girls_canonical_form", "marriage canonical --girls cyclic --n 4"},
    {"conjecture_scan", "marriage scan --n 3"},
};

/// Upgrades a library/domain failure to exit code 1; CLI11 parse problems
/// exit 2; success is 0.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace detail {

inline Json rational_json(const Rational& r) {
  Json j;
  j["fraction"] = to_fraction_string(r);
  j["decimal"] = to_decimal_string(r);
  return j;
}

inline Json permutation_json(const Permutation& p) { return Json(p.values()); }

inline Json profile_json(const PreferenceProfile& p) {
  Json rows = Json::array();
  for (int k = 1; k <= p.size(); ++k) rows.push_back(p.row(k).values());
  return rows;
}

inline Json distribution_json(const RankDistribution& dist) {
  Json counts = Json::object();
  for (const auto& [key, count] : dist.counts) {
    std::ostringstream name;
    for (size_t i = 0; i < key.size(); ++i) {
      if (i) name << ' ';
      name << key[i];
    }
    counts[name.str()] = count.str();
  }
  Json j;
  j["total"] = dist.total.str();
  j["counts"] = std::move(counts);
  return j;
}

/// Fixed 12-significant-digit rendering for derived floating-point values,
/// so reports stay byte-stable.
inline std::string double_string(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

inline std::string csv_escape(const std::string& field) {
  if (field.find_first_of(",\"\n") == std::string::npos) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out += c;
  }
  out += "\"";
  return out;
}

inline std::string scalar_to_string(const Json& j) {
  if (j.is_string()) return j.get<std::string>();
  return j.dump();
}

inline void flatten_json(const Json& j, const std::string& prefix,
                         std::vector<std::pair<std::string, std::string>>& out) {
  if (j.is_object()) {
    for (const auto& [key, value] : j.items())
      flatten_json(value, prefix.empty() ? key : prefix + "." + key, out);
  } else if (j.is_array()) {
    size_t i = 0;
    for (const auto& value : j) flatten_json(value, prefix + "." + std::to_string(i++), out);
  } else {
    out.emplace_back(prefix, scalar_to_string(j));
  }
}

inline std::string to_csv(const Json& report) {
  std::vector<std::pair<std::string, std::string>> rows;
  flatten_json(report, "", rows);
  std::ostringstream os;
  os << "key,value\n";
  for (const auto& [key, value] : rows) os << csv_escape(key) << ',' << csv_escape(value) << '\n';
  return os.str();
}

inline void emit(const Json& report, const std::string& format, std::ostream& out) {
  if (format == "json")
    out << report.dump(2) << '\n';
  else
    out << to_csv(report);
}

inline PreferenceProfile girls_from_spec(const std::string& spec, int n) {
  if (spec == "cyclic") {
    if (n < 1) throw UsageError("--girls cyclic requires --n");
    return cyclic_girls(n);
  }
  if (spec == "equal") {
    if (n < 1) throw UsageError("--girls equal requires --n");
    return equal_girls(n);
  }
  return load_profile(spec);
}

inline const char* method_name(AllocMethod m) {
  return m == AllocMethod::kStable ? "stable" : "hash";
}

}  // namespace detail

/// Runs the command line against the given streams and returns the process
/// exit code. Identical argument vectors produce byte-identical output.
inline int run(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"stable allocation toolkit: allocations, priority/shuffling"
               " correspondence, exact rank statistics, enumeration studies"};
  app.require_subcommand(1);

  std::string format = "json";
  app.add_option("--format", format, "Report format")->check(CLI::IsMember({"json", "csv"}));

  // Shared option storage; each subcommand reads what it declares.
  std::string input_path, perm_csv, pi_csv, sigma_csv, goods_csv, priority_csv;
  std::string quantity, girls_spec = "cyclic", boys_path, checkpoint_path, convention = "both";
  int n = 0, k = -1, j = -1, m = -1, order = 1, workers = 1, count = 1, top = 0;
  uint64_t samples = 0, seed = 0, boys_seed = 0, chunk_size = 100'000'000, max_chunks = 0;
  bool check_flags = false, long_run = false, has_priority = false, has_boys_seed = false;
  std::string method = "stable";

  std::function<Json()> handler;
  auto set = [&handler](std::function<Json()> fn) { return [&handler, fn] { handler = fn; }; };

  Json config;  // filled by the chosen handler with its resolved options

  // ---- validate ----------------------------------------------------------
  CLI::App* validate = app.add_subcommand("validate", "Check a profile file");
  validate->add_option("--input", input_path, "Profile file")->required();
  validate->callback(set([&]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    config["input"] = input_path;
    Json result;
    result["n"] = p.size();
    result["valid"] = true;
    result["profile"] = detail::profile_json(p);
    return result;
  }));

  // ---- allocate ----------------------------------------------------------
  CLI::App* allocate = app.add_subcommand(
      "allocate", "Stable allocation, or priority hashing with --priority");
  allocate->add_option("--input", input_path, "Profile file")->required();
  CLI::Option* prio_opt =
      allocate->add_option("--priority", priority_csv, "Serve traders in this order instead");
  std::string policy = "smallest";
  allocate->add_option("--policy", policy, "Tie-break for introducing traders")
      ->check(CLI::IsMember({"smallest", "largest", "rotating"}));
  allocate->add_flag("--check", check_flags, "Also run the brute-force stability checks (n <= 6)");
  allocate->callback(set([&, prio_opt]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    config["input"] = input_path;
    config["policy"] = policy;
    config["check"] = check_flags;
    AllocationResult result;
    if (static_cast<bool>(*prio_opt)) {
      const Permutation prio = parse_permutation_csv(priority_csv);
      config["method"] = "hash";
      config["priority"] = detail::permutation_json(prio);
      result = uniform_hash_allocation(p, prio);
    } else {
      config["method"] = "stable";
      const IntroducePolicy pol = policy == "largest"    ? IntroducePolicy::kLargestIndex
                                  : policy == "rotating" ? IntroducePolicy::kRotating
                                                         : IntroducePolicy::kSmallestIndex;
      result = stable_allocation(p, pol);
    }
    Json res;
    res["goods"] = detail::permutation_json(result.goods);
    res["ranks"] = result.ranks;
    int rank_sum = 0;
    for (int r : result.ranks) rank_sum += r;
    res["rank_sum"] = rank_sum;
    if (check_flags) {
      res["core"] = is_core_allocation(p, result.goods);
      res["locally_optimal"] = is_locally_optimal(p, result.goods);
    }
    return res;
  }));

  // ---- reconstruct -------------------------------------------------------
  CLI::App* reconstruct = app.add_subcommand(
      "reconstruct", "Find a priority order whose hashing reproduces a locally optimal allocation");
  reconstruct->add_option("--input", input_path, "Profile file")->required();
  reconstruct->add_option("--goods", goods_csv, "Allocation, comma-separated")->required();
  reconstruct->callback(set([&]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    const Permutation goods = parse_permutation_csv(goods_csv);
    config["input"] = input_path;
    config["goods"] = detail::permutation_json(goods);
    const Permutation pi = priority_reconstruction(p, goods);
    Json res;
    res["priority"] = detail::permutation_json(pi);
    res["reproduces_goods"] = uniform_hash_allocation(p, pi).goods == goods;
    return res;
  }));

  // ---- shuffle -----------------------------------------------------------
  CLI::App* shuffle = app.add_subcommand("shuffle", "Reassign preference lists among traders");
  shuffle->add_option("--input", input_path, "Profile file")->required();
  shuffle->add_option("--sigma", sigma_csv, "Shuffling, comma-separated")->required();
  shuffle->callback(set([&]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    const Permutation sigma = parse_permutation_csv(sigma_csv);
    config["input"] = input_path;
    config["sigma"] = detail::permutation_json(sigma);
    Json res;
    res["profile"] = detail::profile_json(shuffle_profile(p, sigma));
    return res;
  }));

  // ---- random ------------------------------------------------------------
  CLI::App* random_cmd = app.add_subcommand("random", "Draw uniform random profiles");
  random_cmd->add_option("--n", n, "Traders")->required();
  random_cmd->add_option("--seed", seed, "Seed (required: runs must be reproducible)")->required();
  random_cmd->add_option("--count", count, "Number of profiles");
  random_cmd->callback(set([&]() -> Json {
    if (n < 1) throw UsageError("--n must be >= 1");
    if (count < 1) throw UsageError("--count must be >= 1");
    config["n"] = n;
    config["seed"] = seed;
    config["count"] = count;
    RngStream rng(seed);
    Json profiles = Json::array();
    for (int i = 0; i < count; ++i)
      profiles.push_back(detail::profile_json(random_profile(n, rng)));
    Json res;
    res["profiles"] = std::move(profiles);
    return res;
  }));

  // ---- bijection ---------------------------------------------------------
  CLI::App* bijection = app.add_subcommand(
      "bijection", "Priority <-> shuffling correspondence for a fixed profile");
  bijection->require_subcommand(1);
  CLI::App* p2s = bijection->add_subcommand("pi-to-sigma", "Shuffling consistent with a priority");
  p2s->add_option("--input", input_path, "Profile file")->required();
  p2s->add_option("--perm", perm_csv, "Priority pi, comma-separated")->required();
  p2s->callback(set([&]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    const Permutation pi = parse_permutation_csv(perm_csv);
    config["input"] = input_path;
    config["pi"] = detail::permutation_json(pi);
    const Permutation sigma = pi_to_sigma(p, pi);
    Json res;
    res["sigma"] = detail::permutation_json(sigma);
    res["consistent"] = is_consistent(p, pi, sigma);
    return res;
  }));
  CLI::App* s2p = bijection->add_subcommand("sigma-to-pi", "Priority consistent with a shuffling");
  s2p->add_option("--input", input_path, "Profile file")->required();
  s2p->add_option("--perm", perm_csv, "Shuffling sigma, comma-separated")->required();
  s2p->callback(set([&]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    const Permutation sigma = parse_permutation_csv(perm_csv);
    config["input"] = input_path;
    config["sigma"] = detail::permutation_json(sigma);
    const Permutation pi = sigma_to_pi(p, sigma);
    Json res;
    res["pi"] = detail::permutation_json(pi);
    res["consistent"] = is_consistent(p, pi, sigma);
    return res;
  }));
  CLI::App* bij_check = bijection->add_subcommand("check", "Is pi consistent with sigma?");
  bij_check->add_option("--input", input_path, "Profile file")->required();
  bij_check->add_option("--pi", pi_csv, "Priority, comma-separated")->required();
  bij_check->add_option("--sigma", sigma_csv, "Shuffling, comma-separated")->required();
  bij_check->callback(set([&]() -> Json {
    const PreferenceProfile p = load_profile(input_path);
    const Permutation pi = parse_permutation_csv(pi_csv);
    const Permutation sigma = parse_permutation_csv(sigma_csv);
    config["input"] = input_path;
    config["pi"] = detail::permutation_json(pi);
    config["sigma"] = detail::permutation_json(sigma);
    Json res;
    res["consistent"] = is_consistent(p, pi, sigma);
    return res;
  }));

  // ---- stats -------------------------------------------------------------
  CLI::App* stats = app.add_subcommand("stats", "Exact closed-form rank statistics");
  stats->add_option("quantity", quantity, "One of: harmonic q-exceed weighted-q-sum rank-sum"
                    " poly square-poly square-sum product-coeff second-moment variance"
                    " rank-variance max-rank-cdf stirling")
      ->required();
  stats->add_option("--n", n, "Traders")->required();
  stats->add_option("--k", k, "Trader / lower index");
  stats->add_option("--j", j, "Rank threshold");
  stats->add_option("--m", m, "Moment order / rank threshold");
  stats->add_option("--order", order, "Harmonic order (1 or 2)");
  stats->callback(set([&]() -> Json {
    config["quantity"] = quantity;
    config["n"] = n;
    Json res;
    auto rational_result = [&](const Rational& r) {
      res["value"] = detail::rational_json(r);
    };
    if (quantity == "harmonic") {
      config["order"] = order;
      rational_result(harmonic(n, order));
    } else if (quantity == "q-exceed") {
      if (k < 0 || j < 0) throw UsageError("q-exceed needs --k and --j");
      config["k"] = k;
      config["j"] = j;
      rational_result(q_exceed(n, k, j));
    } else if (quantity == "weighted-q-sum") {
      if (k < 0 || m < 0) throw UsageError("weighted-q-sum needs --k and --m");
      config["k"] = k;
      config["m"] = m;
      rational_result(weighted_q_sum(n, k, m));
    } else if (quantity == "rank-sum") {
      rational_result(expected_rank_sum(n));
    } else if (quantity == "square-sum") {
      rational_result(expected_square_sum(n));
    } else if (quantity == "product-coeff") {
      rational_result(rank_product_coeff(n));
    } else if (quantity == "second-moment") {
      rational_result(rank_sum_second_moment(n));
    } else if (quantity == "variance") {
      rational_result(rank_sum_variance(n));
    } else if (quantity == "rank-variance") {
      rational_result(expected_rank_variance(n));
    } else if (quantity == "max-rank-cdf") {
      if (m < 0) throw UsageError("max-rank-cdf needs --m");
      config["m"] = m;
      rational_result(max_rank_at_most(n, m));
    } else if (quantity == "stirling") {
      if (k < 0) throw UsageError("stirling needs --k");
      config["k"] = k;
      res["value"] = stirling_cycle(n, k).str();
    } else if (quantity == "poly" || quantity == "square-poly") {
      const RationalPolynomial poly =
          quantity == "poly" ? expected_rank_poly(n) : expected_square_poly(n);
      Json coeffs = Json::array();
      for (int i = 0; i <= poly.degree(); ++i) coeffs.push_back(to_fraction_string(poly.coeff(i)));
      res["coefficients_ascending"] = std::move(coeffs);
      res["display"] = poly.to_string();
    } else {
      throw UsageError("unknown stats quantity '" + quantity + "'");
    }
    return res;
  }));

  // ---- enumerate ---------------------------------------------------------
  std::vector<std::string> extra_priorities;
  CLI::App* enumerate = app.add_subcommand(
      "enumerate", "Exhaustive rank-multiset counts: stable vs priority hashing");
  enumerate->add_option("--n", n, "Traders (<= 4)")->required();
  enumerate->add_option("--priority", extra_priorities,
                        "Extra hash priorities to compare (identity always included)");
  enumerate->add_option("--workers", workers, "Worker threads");
  enumerate->callback(set([&]() -> Json {
    config["n"] = n;
    config["workers"] = workers;
    const RankDistribution stable = exhaustive_rank_distribution(n, AllocMethod::kStable,
                                                                 std::nullopt, workers);
    Json res;
    res["instances"] = stable.total.str();
    res["stable"] = detail::distribution_json(stable);
    Json hash_reports = Json::array();
    std::vector<Permutation> priorities{Permutation::identity(n)};
    for (const std::string& text : extra_priorities)
      priorities.push_back(parse_permutation_csv(text));
    bool all_equal = true;
    for (const Permutation& prio : priorities) {
      const RankDistribution hashed =
          exhaustive_rank_distribution(n, AllocMethod::kHash, prio, workers);
      Json entry;
      entry["priority"] = detail::permutation_json(prio);
      entry["equals_stable"] = hashed == stable;
      all_equal = all_equal && hashed == stable;
      hash_reports.push_back(std::move(entry));
    }
    res["hash"] = std::move(hash_reports);
    res["distributions_match"] = all_equal;
    return res;
  }));

  // ---- simulate ----------------------------------------------------------
  CLI::App* simulate = app.add_subcommand("simulate", "Seeded sampling with exact targets");
  simulate->add_option("--n", n, "Traders")->required();
  simulate->add_option("--samples", samples, "Sample count")->required();
  simulate->add_option("--seed", seed, "Seed (required: runs must be reproducible)")->required();
  simulate->add_option("--method", method, "stable or hash")
      ->check(CLI::IsMember({"stable", "hash"}));
  CLI::Option* sim_prio = simulate->add_option("--priority", priority_csv, "Priority for hash");
  simulate->add_option("--workers", workers, "Worker threads");
  simulate->callback(set([&, sim_prio]() -> Json {
    config["n"] = n;
    config["samples"] = samples;
    config["seed"] = seed;
    config["method"] = method;
    config["workers"] = workers;
    std::optional<Permutation> prio;
    if (static_cast<bool>(*sim_prio)) {
      prio = parse_permutation_csv(priority_csv);
      config["priority"] = detail::permutation_json(*prio);
    }
    const AllocMethod am = method == "hash" ? AllocMethod::kHash : AllocMethod::kStable;
    const MonteCarloSummary mc = monte_carlo_summary(n, samples, seed, am, prio, workers);
    Json res;
    res["mean_rank_sum"] = to_decimal_string(Rational(mc.sum_rank_sum, mc.samples));
    res["var_rank_sum"] = detail::double_string(mc.var_rank_sum());
    res["se_mean_rank_sum"] = detail::double_string(mc.se_mean_rank_sum());
    res["mean_square_sum"] = to_decimal_string(Rational(mc.sum_square_sum, mc.samples));
    res["mean_max_rank"] = to_decimal_string(Rational(mc.sum_max_rank, mc.samples));
    res["prob_max_le_half"] = to_decimal_string(Rational(mc.count_max_le_half, mc.samples));
    Json exact;
    exact["mean_rank_sum"] = detail::rational_json(mc.exact_mean_rank_sum);
    exact["var_rank_sum"] = detail::rational_json(mc.exact_var_rank_sum);
    exact["mean_square_sum"] = detail::rational_json(mc.exact_mean_square_sum);
    exact["prob_max_le_half"] = detail::rational_json(mc.exact_prob_max_le_half);
    res["exact"] = std::move(exact);
    return res;
  }));

  // ---- marriage ----------------------------------------------------------
  CLI::App* marriage = app.add_subcommand(
      "marriage", "Two-sided market studies with fixed girls' preferences");
  marriage->require_subcommand(1);

  CLI::App* mrun = marriage->add_subcommand("run", "One male-optimal matching");
  mrun->add_option("--girls", girls_spec, "cyclic, equal, or a profile file")->required();
  mrun->add_option("--n", n, "Traders (for cyclic/equal girls)");
  CLI::Option* boys_opt = mrun->add_option("--boys", boys_path, "Boys' profile file");
  CLI::Option* boys_seed_opt =
      mrun->add_option("--boys-seed", boys_seed, "Draw the boys' profile from this seed");
  boys_opt->excludes(boys_seed_opt);
  mrun->callback(set([&, boys_opt, boys_seed_opt]() -> Json {
    const PreferenceProfile girls = detail::girls_from_spec(girls_spec, n);
    config["girls"] = girls_spec;
    config["n"] = girls.size();
    PreferenceProfile boys = [&] {
      if (static_cast<bool>(*boys_opt)) {
        config["boys"] = boys_path;
        return load_profile(boys_path);
      }
      if (!static_cast<bool>(*boys_seed_opt))
        throw UsageError("marriage run needs --boys FILE or --boys-seed SEED");
      config["boys_seed"] = boys_seed;
      RngStream rng(boys_seed);
      return random_profile(girls.size(), rng);
    }();
    const MarriageInstance inst(boys, girls);
    const AllocationResult matching = gale_shapley_male_optimal(inst);
    Json res;
    res["boys"] = detail::profile_json(boys);
    res["girls"] = detail::profile_json(girls);
    res["wife_of_boy"] = detail::permutation_json(matching.goods);
    res["ranks"] = matching.ranks;
    int rank_sum = 0;
    for (int r : matching.ranks) rank_sum += r;
    res["rank_sum_one_based"] = rank_sum;
    res["rank_sum_zero_based"] = rank_sum - girls.size();
    return res;
  }));

  CLI::App* mtotal = marriage->add_subcommand(
      "total", "Exhaustive male rank-sum total over all boys' matrices");
  mtotal->add_option("--girls", girls_spec, "cyclic, equal, or a profile file")->required();
  mtotal->add_option("--n", n, "Traders (for cyclic/equal girls)");
  mtotal->add_option("--workers", workers, "Worker threads");
  mtotal->add_option("--convention", convention, "one-based, zero-based, or both")
      ->check(CLI::IsMember({"one-based", "zero-based", "both"}));
  mtotal->add_flag("--long-run", long_run, "Allow n = 5 chunked runs");
  mtotal->add_option("--checkpoint", checkpoint_path, "Checkpoint file for long runs");
  mtotal->add_option("--chunk-size", chunk_size, "Instances per chunk in long runs");
  mtotal->add_option("--max-chunks", max_chunks, "Stop after this many chunks (0 = run out)");
  mtotal->callback(set([&]() -> Json {
    const PreferenceProfile girls = detail::girls_from_spec(girls_spec, n);
    config["girls"] = girls_spec;
    config["n"] = girls.size();
    config["workers"] = workers;
    config["convention"] = convention;
    config["long_run"] = long_run;
    Json res;
    res["girls"] = detail::profile_json(girls);
    auto fill_totals = [&](const MarriageTotals& totals) {
      res["instances"] = totals.instances.str();
      if (convention != "zero-based") res["total_one_based"] = totals.one_based.str();
      if (convention != "one-based") res["total_zero_based"] = totals.zero_based.str();
    };
    if (long_run) {
      config["checkpoint"] = checkpoint_path;
      config["chunk_size"] = chunk_size;
      config["max_chunks"] = max_chunks;
      LongRunOptions opts;
      opts.checkpoint_path = checkpoint_path;
      opts.chunk_size = chunk_size;
      opts.max_chunks = max_chunks;
      opts.workers = workers;
      const LongRunResult lr = total_marriage_rank_sum_long(girls, opts);
      fill_totals(lr.totals);
      res["complete"] = lr.complete();
      res["next_index"] = lr.next_index;
      res["space"] = lr.space;
    } else {
      fill_totals(total_marriage_rank_sum(girls, workers));
      res["complete"] = true;
    }
    return res;
  }));

  CLI::App* msample = marriage->add_subcommand(
      "sample", "Seeded mean male rank sum for fixed girls, random boys");
  msample->add_option("--girls", girls_spec, "cyclic, equal, or a profile file")->required();
  msample->add_option("--n", n, "Traders (for cyclic/equal girls)");
  msample->add_option("--samples", samples, "Sample count")->required();
  msample->add_option("--seed", seed, "Seed (required: runs must be reproducible)")->required();
  msample->add_option("--workers", workers, "Worker threads");
  msample->callback(set([&]() -> Json {
    const PreferenceProfile girls = detail::girls_from_spec(girls_spec, n);
    config["girls"] = girls_spec;
    config["n"] = girls.size();
    config["samples"] = samples;
    config["seed"] = seed;
    config["workers"] = workers;
    const MarriageMonteCarlo mc = marriage_monte_carlo(girls, samples, seed, workers);
    Json res;
    res["mean_rank_sum_one_based"] = to_decimal_string(Rational(mc.sum_rank_sum, mc.samples));
    res["mean_rank_sum_zero_based"] =
        to_decimal_string(Rational(mc.sum_rank_sum, mc.samples) - girls.size());
    res["se_mean"] = detail::double_string(mc.se_mean());
    Json bounds;  // shared-list lower bound and the easy upper bound
    bounds["lower_one_based"] = detail::rational_json(expected_rank_sum(girls.size()));
    bounds["upper_one_based"] = detail::rational_json(
        Rational(girls.size() - 1) * harmonic(girls.size(), 1) + 1);
    res["conjectured_bounds"] = std::move(bounds);
    return res;
  }));

  CLI::App* mscan = marriage->add_subcommand(
      "scan", "Classify all girls' matrices and total each class exhaustively");
  mscan->add_option("--n", n, "Traders (<= 4)")->required();
  mscan->add_option("--workers", workers, "Worker threads");
  mscan->add_option("--top", top, "Only report this many classes from each end (0 = all)");
  mscan->callback(set([&]() -> Json {
    config["n"] = n;
    config["workers"] = workers;
    config["top"] = top;
    const ScanReport report = conjecture_scan(n, workers);
    Json res;
    res["n"] = report.n;
    res["matrices"] = report.matrices;
    res["classes"] = report.classes.size();
    auto class_json = [](const ScanClassRecord& rec) {
      Json c;
      c["girls"] = rec.girls_rows;
      c["class_size"] = rec.class_size;
      c["total_one_based"] = rec.totals.one_based.str();
      c["total_zero_based"] = rec.totals.zero_based.str();
      return c;
    };
    const size_t limit =
        top > 0 ? std::min<size_t>(static_cast<size_t>(top), report.classes.size())
                : report.classes.size();
    Json highest = Json::array();
    for (size_t i = 0; i < limit; ++i) highest.push_back(class_json(report.classes[i]));
    res["highest_totals"] = std::move(highest);
    if (top > 0) {
      Json lowest = Json::array();
      for (size_t i = report.classes.size() - limit; i < report.classes.size(); ++i)
        lowest.push_back(class_json(report.classes[i]));
      res["lowest_totals"] = std::move(lowest);
    }
    return res;
  }));

  CLI::App* mcanon = marriage->add_subcommand(
      "canonical", "Smallest matrix over renamings of boys and girls");
  mcanon->add_option("--girls", girls_spec, "cyclic, equal, or a profile file")->required();
  mcanon->add_option("--n", n, "Traders (for cyclic/equal girls)");
  mcanon->callback(set([&]() -> Json {
    const PreferenceProfile girls = detail::girls_from_spec(girls_spec, n);
    config["girls"] = girls_spec;
    config["n"] = girls.size();
    Json res;
    res["girls"] = detail::profile_json(girls);
    res["canonical"] = detail::profile_json(girls_canonical_form(girls));
    return res;
  }));

  // ---- dispatch ----------------------------------------------------------
  // Let --format (declared on the root) appear after any subcommand.
  std::function<void(CLI::App*)> enable_fallthrough = [&](CLI::App* node) {
    node->fallthrough();
    for (CLI::App* sub : node->get_subcommands([](const CLI::App*) { return true; }))
      enable_fallthrough(sub);
  };
  enable_fallthrough(&app);

  try {
    std::reverse(args.begin(), args.end());  // CLI11 consumes args back to front
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  }

  try {
    Json result = handler();
    Json report;
    report["schema_version"] = kReportSchemaVersion;
    report["tool"] = "stalloc";
    Json full_config;
    std::vector<std::string> path;
    const CLI::App* cur = &app;
    while (const CLI::App* sub = cur->get_subcommands().empty() ? nullptr
                                                                : cur->get_subcommands().front()) {
      path.push_back(sub->get_name());
      cur = sub;
    }
    std::string joined;
    for (const std::string& part : path) {
      if (!joined.empty()) joined += ' ';
      joined += part;
    }
    full_config["subcommand"] = joined;
    full_config["format"] = format;
    for (auto& [key, value] : config.items()) full_config[key] = value;
    report["config"] = std::move(full_config);
    report["result"] = std::move(result);
    detail::emit(report, format, out);
    return 0;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
}

/// argv adapter for main().
inline int run_main(int argc, char** argv, std::ostream& out, std::ostream& err) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return run(std::move(args), out, err);
}

}  // namespace stalloc::cli

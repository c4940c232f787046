// Command-line front end: every analysis as a subcommand over `.mrs` files.
//
// Exit codes: 0 success / analysis positive; 1 analysis negative (not
// confluent, not a group, partial decomposition, property violation);
// 2 operational errors (bad file, parse error, precondition failure);
// 3 unknown letter in a word argument; 4 reduction refused without a step
// budget on a non-length-reducing system.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "strew/strew.hpp"

namespace {

using namespace strew;

constexpr int kExitOk = 0;
constexpr int kExitNegative = 1;
constexpr int kExitError = 2;
constexpr int kExitUnknownLetter = 3;
constexpr int kExitNonTerminating = 4;

/// Collects key=value pairs and prints them line-sorted by key, so kv
/// output is byte-stable for a fixed input.
class Report {
 public:
  explicit Report(bool kv) : kv_(kv) {}

  void add(const std::string& key, const std::string& value,
           const std::string& human_label = {}) {
    kv_pairs_.emplace_back(key, value);
    human_lines_.push_back((human_label.empty() ? key : human_label) + ": " +
                           value);
  }
  void add(const std::string& key, const char* value,
           const std::string& human_label = {}) {
    add(key, std::string(value), human_label);
  }
  void add(const std::string& key, std::size_t value,
           const std::string& human_label = {}) {
    add(key, std::to_string(value), human_label);
  }
  void add(const std::string& key, bool value,
           const std::string& human_label = {}) {
    add(key, value ? std::string("true") : std::string("false"), human_label);
  }
  void add_word(const std::string& key, const Alphabet& alphabet,
                const Word& w, const std::string& human_label = {}) {
    std::string text = render_word(alphabet, w);
    kv_pairs_.emplace_back(key, text);
    human_lines_.push_back((human_label.empty() ? key : human_label) + ": " +
                           (text.empty() ? "(empty)" : text));
  }

  void print() const {
    if (kv_) {
      auto sorted = kv_pairs_;
      std::sort(sorted.begin(), sorted.end());
      for (const auto& [k, v] : sorted) std::cout << k << '=' << v << '\n';
    } else {
      for (const auto& line : human_lines_) std::cout << line << '\n';
    }
  }

 private:
  bool kv_;
  std::vector<std::pair<std::string, std::string>> kv_pairs_;
  std::vector<std::string> human_lines_;
};

std::string table_text(const std::vector<std::vector<std::size_t>>& table,
                       const std::vector<std::string>& names) {
  std::string out;
  for (std::size_t i = 0; i < table.size(); ++i) {
    if (i) out += ';';
    for (std::size_t j = 0; j < table[i].size(); ++j) {
      if (j) out += ',';
      out += names[table[i][j]];
    }
  }
  return out;
}

RewritingSystem load_or_exit(const std::string& path) {
  return load_system(path);  // errors handled by the caller's catch block
}

/// Non-normalized inputs are normalized on the fly for the analyses that
/// require it; the report says so.
struct AnalysisInput {
  RewritingSystem system;
  bool auto_normalized;
};

AnalysisInput analysis_input(const RewritingSystem& sys) {
  if (sys.flags().normalized) return {sys, false};
  NormalizationResult nr = normalize(sys);
  return {std::move(nr.system), true};
}

int cmd_validate(const std::string& path, bool kv) {
  auto sys = load_or_exit(path);
  const Classification& f = sys.flags();
  Report report(kv);
  report.add("finite", f.finite);
  report.add("length_reducing", f.length_reducing);
  report.add("letters", sys.alphabet().size());
  report.add("monadic", f.monadic);
  report.add("normalized", f.normalized);
  report.add("rules", sys.rules().size());
  report.add("special", f.special);
  report.add("terminating", f.terminating);
  report.add("two_monadic", f.two_monadic);
  report.print();
  return kExitOk;
}

int cmd_reduce(const std::string& path, const std::string& word_text,
               const std::string& strategy_name, std::uint64_t seed,
               bool trace, std::optional<std::size_t> max_steps, bool kv) {
  auto sys = load_or_exit(path);
  Word word;
  try {
    word = parse_word(sys.alphabet(), word_text);
  } catch (const UnknownLetterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUnknownLetter;
  }
  Strategy strategy = Strategy::leftmost();
  if (strategy_name == "rightmost") strategy = Strategy::rightmost();
  if (strategy_name == "random") strategy = Strategy::random(seed);
  auto result = reduce(sys, word, strategy, max_steps);
  Report report(kv);
  report.add_word("result", sys.alphabet(), result.result);
  report.add("steps", result.steps.size());
  if (trace) {
    char key[32];
    for (std::size_t i = 0; i < result.steps.size(); ++i) {
      const auto& s = result.steps[i];
      std::snprintf(key, sizeof key, "step_%03zu", i);
      report.add(key, std::to_string(s.position) + ":" +
                          std::to_string(s.rule_index) + ":" +
                          render_word(sys.alphabet(), s.after));
    }
  }
  report.print();
  return kExitOk;
}

int cmd_confluence(const std::string& path, bool kv) {
  auto sys = load_or_exit(path);
  auto rep = is_confluent(sys);
  Report report(kv);
  report.add("confluent", rep.confluent);
  report.add("pairs_checked", rep.pairs_checked);
  if (rep.witness) {
    report.add_word("witness_source", sys.alphabet(), rep.witness->pair.source);
    report.add_word("witness_left", sys.alphabet(), rep.witness->left_nf);
    report.add_word("witness_right", sys.alphabet(), rep.witness->right_nf);
  }
  report.print();
  return rep.confluent ? kExitOk : kExitNegative;
}

int cmd_normalize(const std::string& path, const std::string& out_path,
                  bool kv) {
  auto sys = load_or_exit(path);
  NormalizationResult nr = normalize(sys);
  Report report(kv);
  report.add("letters_before", sys.alphabet().size());
  report.add("letters_after", nr.system.alphabet().size());
  report.add("rules_before", sys.rules().size());
  report.add("rules_after", nr.system.rules().size());
  for (std::size_t i = 0; i < nr.letter_map.size(); ++i)
    report.add_word("map_" + sys.alphabet().symbols()[i],
                    nr.system.alphabet(), nr.letter_map[i]);
  if (!out_path.empty()) {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + out_path);
    out << render_with_map(nr, sys.alphabet());
    report.add("out", out_path);
  }
  report.print();
  return kExitOk;
}

int cmd_analyze(const std::string& path, std::size_t bound, bool kv) {
  auto sys = load_or_exit(path);
  auto input = analysis_input(sys);
  GroupStatus status = group_status(input.system, bound);
  Report report(kv);
  report.add("auto_normalized", input.auto_normalized);
  const char* answer = status.answer == GroupAnswer::kYes  ? "yes"
                       : status.answer == GroupAnswer::kNo ? "no"
                                                           : "unknown";
  report.add("group", answer);
  report.add("search_bound", status.search_bound);
  if (status.answer == GroupAnswer::kYes) {
    const Alphabet& ab = input.system.alphabet();
    for (std::size_t i = 0; i < ab.size(); ++i)
      report.add_word("inverse_" + ab.symbols()[i], ab, status.inverses[i]);
    auto dfls = detect_dfl_subgroups(input.system, status);
    auto rcs = detect_rc_subgroups(
        input.system, status,
        std::max<std::size_t>(1, input.system.max_lhs_length() - 1), 64);
    report.add("dfl_count", dfls.size());
    report.add("rc_count", rcs.size());
    for (std::size_t i = 0; i < dfls.size(); ++i) {
      const auto& d = dfls[i];
      std::string prefix = "dfl_" + std::to_string(i) + "_";
      report.add_word(prefix + "tail", ab, d.tail);
      std::string letters;
      std::vector<std::string> names{"1"};
      for (Letter x : d.first_letters) {
        if (!letters.empty()) letters += ' ';
        letters += ab.display(x);
        names.push_back(ab.display(x));
      }
      report.add(prefix + "letters", letters);
      report.add(prefix + "order", d.order);
      report.add(prefix + "table", table_text(d.table, names));
      if (d.inverse_letter)
        report.add(prefix + "inverse_letter", ab.display(*d.inverse_letter));
    }
    for (std::size_t i = 0; i < rcs.size(); ++i) {
      std::string prefix = "rc_" + std::to_string(i) + "_";
      report.add_word(prefix + "generator", ab, rcs[i].generator);
      report.add(prefix + "order", rcs[i].order);
    }
  }
  report.print();
  return status.answer == GroupAnswer::kYes ? kExitOk : kExitNegative;
}

int cmd_decompose(const std::string& path, bool kv) {
  auto sys = load_or_exit(path);
  auto input = analysis_input(sys);
  GroupStatus status = group_status(input.system);
  PlainDecomposition d = decompose(input.system, status);
  Report report(kv);
  report.add("auto_normalized", input.auto_normalized);
  report.add("confidence", d.confidence);
  report.add("conjugacy_bound", d.conjugacy_bound);
  report.add("consistency",
             d.consistency_ok ? std::string("ok")
                              : "mismatch(" + d.consistency_detail + ")");
  report.add("factor_count", d.finite_factors.size());
  report.add("free_rank", d.free_rank);
  report.add("merged_conjugates", d.merged_conjugates);
  const Alphabet& ab = input.system.alphabet();
  for (std::size_t i = 0; i < d.finite_factors.size(); ++i) {
    const FiniteFactor& f = d.finite_factors[i];
    std::string prefix = "factor_" + std::to_string(i) + "_";
    report.add(prefix + "order", f.order());
    report.add(prefix + "origin", f.origin);
    std::string elements;
    std::vector<std::string> names;
    for (const Word& e : f.elements) {
      std::string text = e.empty() ? "1" : render_word(ab, e);
      if (!elements.empty()) elements += ' ';
      elements += text;
      names.push_back(text);
    }
    report.add(prefix + "elements", elements);
    report.add(prefix + "table", table_text(f.table, names));
  }
  report.print();
  return d.confidence == "exact" ? kExitOk : kExitNegative;
}

int cmd_ball(const std::string& path, std::size_t radius,
             const std::string& dot_path, std::size_t cap, bool kv) {
  auto sys = load_or_exit(path);
  auto input = analysis_input(sys);
  CayleyBall ball = build_ball(input.system, radius, cap);
  Report report(kv);
  report.add("auto_normalized", input.auto_normalized);
  report.add("edges", ball.edges.size());
  report.add("loops", ball.has_loops);
  report.add("multi_edges", ball.has_multi_edges);
  report.add("radius", ball.radius);
  report.add("vertices", ball.vertices.size());
  if (!dot_path.empty()) {
    std::ofstream out(dot_path, std::ios::binary);
    if (!out) throw Error("cannot write file: " + dot_path);
    out << export_dot(ball, input.system.alphabet());
    report.add("dot", dot_path);
  }
  report.print();
  return kExitOk;
}

int cmd_check(const std::string& path, const std::string& lemma,
              std::size_t radius, std::size_t max_pairs, bool kv) {
  auto sys = load_or_exit(path);
  Report report(kv);
  report.add("lemma", lemma);

  if (lemma == "cochet") {
    try {
      CochetReport r = check_cochet(sys);
      report.add("factors", r.factors.size());
      report.add("free_rank", r.free_rank);
      for (std::size_t i = 0; i < r.factors.size(); ++i) {
        report.add("factor_" + std::to_string(i) + "_order",
                   r.factors[i].order);
      }
      report.add("ok", true);
      report.print();
      return kExitOk;
    } catch (const TheoremViolationError& e) {
      report.add("ok", false);
      report.add("violation", e.what());
      report.print();
      return kExitNegative;
    }
  }

  auto input = analysis_input(sys);
  GroupStatus status = group_status(input.system);
  if (status.answer != GroupAnswer::kYes)
    throw PreconditionError("group", "ball checks need a group system");

  if (lemma == "dfl-props") {
    auto dfls = detect_dfl_subgroups(input.system, status);
    std::size_t violations = 0, members = 0;
    for (const DflSubgroup& d : dfls) {
      if (!d.tail.empty() &&
          (!d.inverse_letter ||
           !normal_form(input.system,
                        d.tail + Word::single(*d.inverse_letter))
                .empty()))
        ++violations;
      if (d.witnesses.empty()) ++violations;
      for (std::size_t i = 0; i < d.first_letters.size(); ++i) {
        Word rep = d.representative(i);
        if (cycle_and_reduce(input.system, rep).ell != rep.size()) continue;
        ++members;
        try {
          unique_afl_rotation(input.system, dfls, rep);
        } catch (const LemmaViolationError&) {
          ++violations;
        }
      }
    }
    report.add("members_checked", members);
    report.add("subgroups", dfls.size());
    report.add("violations", violations);
    report.add("ok", violations == 0);
    report.print();
    return violations == 0 ? kExitOk : kExitNegative;
  }

  CayleyBall ball = build_ball(input.system, radius);
  if (lemma == "single-edge") {
    SingleEdgeReport r = check_single_edge(ball);
    report.add("pairs_checked", r.pairs_checked);
    report.add("pairs_with_two_disjoint", r.pairs_with_two_disjoint);
    report.add("ok", r.ok);
    report.print();
    return r.ok ? kExitOk : kExitNegative;
  }
  if (lemma == "plain-geometry") {
    std::size_t checked = 0, paths = 0, violations = 0;
    for (std::uint32_t g = 0;
         g < ball.vertices.size() && checked < max_pairs; ++g) {
      for (std::uint32_t h = 0;
           h < ball.vertices.size() && checked < max_pairs; ++h) {
        if (g == h) continue;
        try {
          Dipath geo = geodesic(ball, ball.vertices[g], ball.vertices[h]);
          std::size_t max_len =
              geo.labels.size() + 2 * input.system.max_lhs_length();
          auto r = check_path_confinement(ball, ball.vertices[g],
                                          ball.vertices[h], max_len);
          ++checked;
          paths += r.paths_checked;
          if (!r.ok) ++violations;
        } catch (const OutOfBallError&) {
          continue;  // pair not coverable at this radius
        }
      }
    }
    report.add("pairs_checked", checked);
    report.add("paths_checked", paths);
    report.add("violations", violations);
    report.add("ok", violations == 0);
    report.print();
    return violations == 0 ? kExitOk : kExitNegative;
  }
  throw Error("unknown lemma: " + lemma);
}

int cmd_sample(std::uint64_t seed, std::size_t count, std::size_t alphabet,
               std::size_t max_rules, std::size_t max_lhs, bool special_only,
               bool group_only, std::size_t budget,
               const std::string& out_dir, bool kv) {
  SamplerConfig cfg;
  cfg.seed = seed;
  cfg.alphabet_size = alphabet;
  cfg.max_rules = max_rules;
  cfg.max_lhs_len = max_lhs;
  cfg.allow_special_only = special_only;

  std::vector<RewritingSystem> systems;
  std::size_t attempts = 0;
  if (group_only) {
    auto [found, stats] = sample_group_systems(cfg, count, budget);
    systems = std::move(found);
    attempts = stats.attempts;
  } else {
    for (std::size_t i = 0; i < count; ++i) {
      SamplerConfig c = cfg;
      c.seed = strew::detail::splitmix64(seed ^ i);
      systems.push_back(sample_system(c));
      ++attempts;
    }
  }
  std::filesystem::create_directories(out_dir);
  for (std::size_t i = 0; i < systems.size(); ++i) {
    std::string name = out_dir + "/sys_" + std::to_string(seed) + "_" +
                       std::to_string(i) + ".mrs";
    std::ofstream out(name, std::ios::binary);
    if (!out) throw Error("cannot write file: " + name);
    out << render(systems[i]);
  }
  Report report(kv);
  report.add("attempts", attempts);
  report.add("dir", out_dir);
  report.add("written", systems.size());
  report.print();
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"analyzer for finite length-reducing string-rewriting systems"};
  app.require_subcommand(1);

  std::string path, word_text, mode = "human", strategy = "leftmost";
  std::string out_path, dot_path, lemma, out_dir = "samples";
  std::uint64_t seed = 0;
  std::size_t bound = 0, radius = 3, cap = 1'000'000, max_pairs = 25;
  std::size_t count = 10, alphabet = 2, max_rules = 3, max_lhs = 3;
  std::size_t budget = 100'000;
  std::optional<std::size_t> max_steps;
  bool trace = false, special_only = false, group_only = false;

  auto add_mode = [&](CLI::App* cmd) {
    cmd->add_option("--mode", mode, "output mode")
        ->check(CLI::IsMember({"human", "kv"}));
  };

  auto* validate = app.add_subcommand("validate", "parse and classify");
  validate->add_option("file", path)->required();
  add_mode(validate);

  auto* red = app.add_subcommand("reduce", "reduce a word to normal form");
  red->add_option("file", path)->required();
  red->add_option("word", word_text)->required();
  red->add_option("--strategy", strategy)
      ->check(CLI::IsMember({"leftmost", "rightmost", "random"}));
  red->add_option("--seed", seed, "seed for the random strategy");
  red->add_flag("--trace", trace, "print every step");
  red->add_option("--max-steps", max_steps,
                  "step budget (required for non-length-reducing systems)");
  add_mode(red);

  auto* conf = app.add_subcommand("confluence", "critical-pair test");
  conf->add_option("file", path)->required();
  add_mode(conf);

  auto* norm = app.add_subcommand("normalize", "rewrite to normalized form");
  norm->add_option("file", path)->required();
  norm->add_option("--out", out_path, "write the normalized system here");
  add_mode(norm);

  auto* ana = app.add_subcommand("analyze", "group status and finite subgroups");
  ana->add_option("file", path)->required();
  ana->add_option("--bound", bound, "inverse search bound (0 = heuristic)");
  add_mode(ana);

  auto* dec = app.add_subcommand("decompose", "plain-group decomposition");
  dec->add_option("file", path)->required();
  add_mode(dec);

  auto* ball = app.add_subcommand("ball", "build a Cayley ball");
  ball->add_option("file", path)->required();
  ball->add_option("--radius", radius)->required();
  ball->add_option("--dot", dot_path, "write DOT graph here");
  ball->add_option("--cap", cap, "vertex budget");
  add_mode(ball);

  auto* chk = app.add_subcommand("check", "verify a structural property");
  chk->add_option("file", path)->required();
  chk->add_option("--lemma", lemma)
      ->required()
      ->check(CLI::IsMember(
          {"plain-geometry", "single-edge", "dfl-props", "cochet"}));
  chk->add_option("--radius", radius, "ball radius for geometry checks");
  chk->add_option("--pairs", max_pairs, "vertex pairs for plain-geometry");
  add_mode(chk);

  auto* smp = app.add_subcommand("sample", "generate random systems");
  smp->add_option("--seed", seed);
  smp->add_option("--count", count, "systems to emit");
  smp->add_option("--alphabet", alphabet);
  smp->add_option("--max-rules", max_rules);
  smp->add_option("--max-lhs", max_lhs);
  smp->add_flag("--special-only", special_only, "empty right-hand sides only");
  smp->add_flag("--group-only", group_only,
                "keep only confluent group systems");
  smp->add_option("--budget", budget, "attempt budget for --group-only");
  smp->add_option("--out-dir", out_dir)->required();
  add_mode(smp);

  CLI11_PARSE(app, argc, argv);
  bool kv = mode == "kv";

  try {
    if (validate->parsed()) return cmd_validate(path, kv);
    if (red->parsed())
      return cmd_reduce(path, word_text, strategy, seed, trace, max_steps, kv);
    if (conf->parsed()) return cmd_confluence(path, kv);
    if (norm->parsed()) return cmd_normalize(path, out_path, kv);
    if (ana->parsed()) return cmd_analyze(path, bound, kv);
    if (dec->parsed()) return cmd_decompose(path, kv);
    if (ball->parsed()) return cmd_ball(path, radius, dot_path, cap, kv);
    if (chk->parsed()) return cmd_check(path, lemma, radius, max_pairs, kv);
    if (smp->parsed())
      return cmd_sample(seed, count, alphabet, max_rules, max_lhs,
                        special_only, group_only, budget, out_dir, kv);
  } catch (const NonTerminatingRiskError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitNonTerminating;
  } catch (const LemmaViolationError& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kExitNegative;
  } catch (const TheoremViolationError& e) {
    std::cerr << "violation: " << e.what() << '\n';
    return kExitNegative;
  } catch (const NormalizationFailedError& e) {
    std::cerr << "failed: " << e.what() << '\n';
    return kExitNegative;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitError;
  }
  return kExitError;
}

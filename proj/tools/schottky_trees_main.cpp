// Command line front end.  Subcommands: classify, reduce, realize, verify,
// sweep, threegap, table.  All exact values print as text (integers,
// fractions, or quadratic expressions); output is JSON except for the CSV
// table mode.  Exit codes: 0 success, 1 a verification found a discrepancy,
// 2 bad input.
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "schottky/cf_gap.hpp"
#include "schottky/oracle.hpp"

using nlohmann::ordered_json;
using namespace schottky;

namespace {

long long to_ll(const num::Int& v) { return v.convert_to<long long>(); }

ordered_json text_or_null(const std::optional<words::Word>& w) {
  return w ? ordered_json(w->text()) : ordered_json(nullptr);
}

template <class L>
ordered_json classification_json(const triples::Classification<L>& c) {
  ordered_json out;
  out["case"] = triples::to_text(c.tag);
  out["generator_a"] = text_or_null(c.generator_a);
  out["generator_b"] = text_or_null(c.generator_b);
  out["m_a"] = c.m_a ? ordered_json(num::to_text(*c.m_a)) : ordered_json(nullptr);
  if (c.b_elliptic)
    out["m_b"] = "elliptic";
  else
    out["m_b"] = c.m_b ? ordered_json(num::to_text(*c.m_b)) : ordered_json(nullptr);
  out["relation"] =
      c.relation ? ordered_json(triples::to_text(*c.relation)) : ordered_json(nullptr);
  out["measure"] =
      c.measure ? ordered_json(num::to_text(*c.measure)) : ordered_json(nullptr);
  out["j"] = c.j ? ordered_json(*c.j) : ordered_json(nullptr);
  out["q"] = c.q ? ordered_json(to_ll(*c.q)) : ordered_json(nullptr);
  out["l0_threshold"] = c.l0_threshold ? ordered_json(num::to_text(*c.l0_threshold))
                                       : ordered_json(nullptr);
  return out;
}

trees::TwistSpec parse_twist(const std::string& s) {
  if (s.empty() || s == "default") return trees::TwistSpec::defaults();
  if (s.rfind("target:", 0) == 0)
    return trees::TwistSpec::target(std::stoll(s.substr(7)));
  if (s.rfind("ports:", 0) == 0) {
    std::vector<std::pair<int, trees::Vertex>> ports;
    std::string rest = s.substr(6);
    std::size_t pos = 0;
    while (pos < rest.size()) {
      std::size_t comma = rest.find(',', pos);
      std::string item = rest.substr(pos, comma == std::string::npos
                                              ? std::string::npos
                                              : comma - pos);
      std::size_t at = item.find('@');
      if (at == std::string::npos || (item.substr(0, at) != "g1" &&
                                      item.substr(0, at) != "g2"))
        throw std::domain_error("twist port must look like g2@ba");
      int gen = item[1] == '1' ? 1 : 2;
      ports.emplace_back(gen, trees::Vertex::parse(item.substr(at + 1)));
      if (comma == std::string::npos) break;
      pos = comma + 1;
    }
    return trees::TwistSpec::with_ports(std::move(ports));
  }
  throw std::domain_error("twist must be default, target:N or ports:...");
}

ordered_json vertex_list(const std::set<trees::Vertex>& vs) {
  ordered_json arr = ordered_json::array();
  for (const auto& v : vs) arr.push_back(v.text());
  return arr;
}

struct TripleArgs {
  std::string l, m1, m2;
};

triples::GeometricTriple<num::Quad> parse_triple(const TripleArgs& args) {
  return triples::make_triple(num::parse_quad(args.l), num::parse_quad(args.m1),
                              num::parse_quad(args.m2));
}

long long parse_engine_int(const std::string& s, const char* what) {
  num::Int v = num::parse_int(s);
  if (v < 0 || v > num::Int(std::numeric_limits<long long>::max()))
    throw std::domain_error(std::string(what) + " out of range");
  return to_ll(v);
}

int run_classify(const TripleArgs& args, const std::string& l0_text) {
  auto t = parse_triple(args);
  triples::Classification<num::Quad> cls;
  if (l0_text.empty())
    cls = triples::classify(t);
  else
    cls = triples::classify(t, num::parse_quad(l0_text));
  std::cout << classification_json(cls).dump(2) << "\n";
  return 0;
}

int run_reduce(const TripleArgs& args) {
  auto t = parse_triple(args);
  ordered_json out;
  out["input"] = {num::to_text(t.l), num::to_text(t.m1), num::to_text(t.m2)};
  try {
    auto trace = triples::reduce_trace(t);
    out["swapped_input"] = trace.swapped_input;
    ordered_json states = ordered_json::array();
    for (const auto& st : trace.states) {
      ordered_json row;
      row["l"] = num::to_text(st.triple.l);
      row["m1"] = num::to_text(st.triple.m1);
      row["m2"] = num::to_text(st.triple.m2);
      row["w1"] = st.w1.text();
      row["w2"] = st.w2.text();
      states.push_back(row);
    }
    out["states"] = states;
    const char* names[] = {"I", "II", "III", "IV"};
    out["terminal"] = names[static_cast<int>(trace.terminal)];
  } catch (const triples::irrational_impossible&) {
    out["terminal"] = "irrational_impossible";
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_realize(const TripleArgs& args, const std::string& twist,
                long long bridge) {
  long long l = parse_engine_int(args.l, "l");
  long long m1 = parse_engine_int(args.m1, "m1");
  long long m2 = parse_engine_int(args.m2, "m2");
  trees::ActionPair pair = trees::realize(l, m1, m2, parse_twist(twist), bridge);
  trees::PairMeasurement meas = trees::measure_pair(pair);

  ordered_json out;
  out["l"] = pair.l;
  out["m1"] = pair.m1;
  out["m2"] = pair.m2;
  if (pair.l == 0) out["bridge"] = pair.bridge;
  out["twist_g1"] = vertex_list(pair.twist1);
  out["twist_g2"] = vertex_list(pair.twist2);
  ordered_json ax1 = ordered_json::array(), ax2 = ordered_json::array();
  for (long long i = -4; i <= 4; ++i) {
    ax1.push_back(pair.axis1.at(i).text());
    ax2.push_back(pair.axis2.at(i).text());
  }
  out["axis1"] = ax1;
  out["axis2"] = ax2;
  out["v_minus"] = pair.v_minus.text();
  out["v_plus"] = pair.v_plus.text();

  ordered_json m;
  m["m1"] = meas.m1;
  m["m2"] = meas.m2;
  m["meeting"] = meas.rel.meeting;
  if (meas.rel.meeting)
    m["overlap"] = meas.rel.overlap;
  else
    m["bridge"] = meas.rel.bridge;
  bool consistent = meas.m1 == m1 && meas.m2 == m2 &&
                    (l >= 1 ? meas.rel.meeting && meas.rel.overlap == l
                            : !meas.rel.meeting && meas.rel.bridge == bridge);
  m["consistent"] = consistent;
  out["measured"] = m;
  std::cout << out.dump(2) << "\n";
  return consistent ? 0 : 1;
}

int run_verify(const TripleArgs& args, const std::string& twist, int survey_len,
               bool no_survey, bool no_ping_pong) {
  long long l = parse_engine_int(args.l, "l");
  long long m1 = parse_engine_int(args.m1, "m1");
  long long m2 = parse_engine_int(args.m2, "m2");
  oracle::SweepOptions opts;
  opts.survey_max_len = survey_len;
  opts.run_survey = !no_survey;
  opts.run_ping_pong = !no_ping_pong;
  oracle::SweepReport rep = oracle::sweep_triple(l, m1, m2, parse_twist(twist), opts);

  ordered_json out;
  out["triple"] = {l, m1, m2};
  out["verdict"] = classification_json(rep.verdict);
  out["measured_l0"] =
      rep.measured_l0 >= 0 ? ordered_json(rep.measured_l0) : ordered_json(nullptr);
  out["l0_exact"] = rep.l0_exact;
  ordered_json checks;
  checks["triple"] = rep.triple_ok;
  checks["types"] = rep.types_ok;
  checks["measure"] = rep.measure_ok;
  checks["ping_pong"] = rep.ping_pong_ok;
  checks["survey"] = rep.survey_ok;
  out["checks"] = checks;
  out["words_surveyed"] = rep.words_surveyed;
  out["ok"] = rep.ok();
  out["detail"] = rep.detail.empty() ? ordered_json(nullptr) : ordered_json(rep.detail);
  std::cout << out.dump(2) << "\n";
  return rep.ok() ? 0 : 1;
}

int run_sweep(long long max_m, int survey_len, unsigned threads) {
  oracle::SweepOptions opts;
  opts.survey_max_len = survey_len;
  oracle::GridReport rep = oracle::cross_validate_grid(max_m, opts, threads);
  ordered_json out;
  out["max_m"] = max_m;
  out["cells"] = rep.cells;
  out["passed"] = rep.passed;
  out["skipped_targets"] = rep.skipped_targets;
  out["failures"] = rep.failures;
  out["ok"] = rep.ok();
  std::cout << out.dump(2) << "\n";
  return rep.ok() ? 0 : 1;
}

int run_threegap(const std::string& alpha_text, const std::string& m1_text,
                 const std::string& m2_text, unsigned long long steps,
                 std::size_t j_max) {
  ordered_json out;
  if (!m1_text.empty() || !m2_text.empty()) {
    if (m1_text.empty() || m2_text.empty())
      throw std::domain_error("threegap wants both --m1 and --m2");
    auto rep = gaps::verify_correspondence(num::parse_quad(m1_text),
                                           num::parse_quad(m2_text), j_max, steps);
    out["m1"] = m1_text;
    out["m2"] = m2_text;
    out["levels"] = rep.levels;
    out["steps"] = rep.steps;
    out["max_distinct_gaps"] = rep.max_distinct_gaps;
    out["quotients_match"] = rep.quotients_match;
    out["exceptional_values_match"] = rep.exceptional_values_match;
    out["at_most_three_gaps"] = rep.at_most_three_gaps;
    out["observed_gaps_in_formula"] = rep.observed_gaps_in_formula;
    out["formula_gaps_realized"] = rep.formula_gaps_realized;
    out["ok"] = rep.ok();
    std::cout << out.dump(2) << "\n";
    return rep.ok() ? 0 : 1;
  }

  if (alpha_text.empty()) throw std::domain_error("threegap wants --alpha or --m1/--m2");
  num::Quad alpha = num::parse_quad(alpha_text);
  auto orbit = gaps::alpha_orbit(alpha, j_max);
  out["alpha"] = num::to_text(alpha);
  ordered_json levels = ordered_json::array();
  for (std::size_t j = 1; j <= orbit.levels(); ++j) {
    ordered_json lvl;
    lvl["j"] = j;
    lvl["alpha_j"] = num::to_text(orbit.alpha_(j));
    lvl["q_j"] = to_ll(orbit.q_(j));
    levels.push_back(lvl);
  }
  out["levels"] = levels;
  out["orbit_terminated"] = orbit.terminated;

  gaps::ThreeGapScan<num::Quad> scan(alpha);
  unsigned long long ran = 0;
  bool wrapped = false;
  std::size_t worst = scan.distinct_gaps();
  for (unsigned long long n = 0; n < steps; ++n) {
    if (!scan.advance()) {
      wrapped = true;
      break;
    }
    ++ran;
    worst = std::max(worst, scan.distinct_gaps());
  }
  out["steps"] = ran;
  out["wrapped"] = wrapped;
  out["points"] = scan.point_count();
  out["max_distinct_gaps"] = worst;
  ordered_json gaps_arr = ordered_json::array();
  bool all_in_formula = true;
  for (const auto& [g, count] : scan.gap_multiset()) {
    ordered_json row;
    row["gap"] = num::to_text(g);
    row["count"] = count;
    bool in_formula = gaps::formula_contains(alpha, g);
    row["in_formula"] = in_formula;
    all_in_formula = all_in_formula && in_formula;
    gaps_arr.push_back(row);
  }
  out["gaps"] = gaps_arr;
  out["ok"] = worst <= 3 && all_in_formula;
  std::cout << out.dump(2) << "\n";
  return (worst <= 3 && all_in_formula) ? 0 : 1;
}

int run_table(long long max_m, bool csv) {
  std::vector<triples::Classification<num::Int>> rows;
  std::vector<std::array<long long, 3>> keys;
  for (long long m1 = 1; m1 <= max_m; ++m1)
    for (long long m2 = 1; m2 <= m1; ++m2)
      for (long long l = 0; l <= m1 + m2; ++l) {
        keys.push_back({l, m1, m2});
        rows.push_back(triples::classify(triples::GeometricTriple<num::Int>{
            num::Int(l), num::Int(m1), num::Int(m2)}));
      }

  if (csv) {
    std::cout << "l,m1,m2,case,generator_a,generator_b,m_a,m_b,relation,measure,"
                 "j,q,l0_threshold\n";
    for (std::size_t i = 0; i < rows.size(); ++i) {
      const auto& c = rows[i];
      auto opt = [](const std::optional<std::string>& s) { return s ? *s : ""; };
      std::optional<std::string> mb;
      if (c.b_elliptic)
        mb = "elliptic";
      else if (c.m_b)
        mb = num::to_text(*c.m_b);
      std::cout << keys[i][0] << "," << keys[i][1] << "," << keys[i][2] << ","
                << triples::to_text(c.tag) << ","
                << (c.generator_a ? c.generator_a->text() : "") << ","
                << (c.generator_b ? c.generator_b->text() : "") << ","
                << (c.m_a ? num::to_text(*c.m_a) : "") << "," << opt(mb) << ","
                << (c.relation ? triples::to_text(*c.relation) : "") << ","
                << (c.measure ? num::to_text(*c.measure) : "") << ","
                << (c.j ? std::to_string(*c.j) : "") << ","
                << (c.q ? std::to_string(to_ll(*c.q)) : "") << ","
                << (c.l0_threshold ? num::to_text(*c.l0_threshold) : "") << "\n";
    }
    return 0;
  }

  ordered_json arr = ordered_json::array();
  for (std::size_t i = 0; i < rows.size(); ++i) {
    ordered_json row;
    row["l"] = keys[i][0];
    row["m1"] = keys[i][1];
    row["m2"] = keys[i][2];
    row["classification"] = classification_json(rows[i]);
    arr.push_back(row);
  }
  std::cout << arr.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Classify the group generated by two tree translations with overlapping "
      "axes, and verify the verdict against an explicit action"};
  app.require_subcommand(1);

  TripleArgs targs;
  std::string l0_text, twist = "default", alpha_text, m1_text, m2_text;
  long long bridge = 1, max_m = 4;
  int survey_len = 6;
  unsigned threads = 0;
  unsigned long long steps = 200;
  std::size_t j_max = 8;
  bool no_survey = false, no_ping_pong = false, csv = false;

  auto add_triple = [&](CLI::App* sub) {
    sub->add_option("l", targs.l, "overlap length")->required();
    sub->add_option("m1", targs.m1, "first translation length")->required();
    sub->add_option("m2", targs.m2, "second translation length")->required();
  };

  CLI::App* classify = app.add_subcommand(
      "classify", "classify a triple; exact rational or quadratic values");
  add_triple(classify);
  classify->add_option("--l0", l0_text,
                       "secondary overlap, resolves the threshold case");

  CLI::App* reduce = app.add_subcommand("reduce", "print the reduction trace");
  add_triple(reduce);

  CLI::App* realize = app.add_subcommand(
      "realize", "build a concrete pair of automorphisms for an integer triple");
  add_triple(realize);
  realize->add_option("--twist", twist, "default | target:N | ports:g2@ba,...");
  realize->add_option("--bridge", bridge, "axis distance when l = 0")
      ->check(CLI::PositiveNumber);

  CLI::App* verify = app.add_subcommand(
      "verify", "classify, realize and check every claim against the action");
  add_triple(verify);
  verify->add_option("--twist", twist, "default | target:N | ports:g2@ba,...");
  verify->add_option("--survey-len", survey_len, "word length cutoff");
  verify->add_flag("--no-survey", no_survey, "skip the word survey");
  verify->add_flag("--no-ping-pong", no_ping_pong, "skip the ping pong check");

  CLI::App* sweep = app.add_subcommand(
      "sweep", "cross validate every triple up to a translation bound");
  sweep->add_option("--max-m", max_m, "largest translation length")->required();
  sweep->add_option("--survey-len", survey_len, "word length cutoff");
  sweep->add_option("--threads", threads,
                    "worker threads, SCHOTTKY_TREES_THREADS otherwise");

  CLI::App* threegap = app.add_subcommand(
      "threegap", "gap structure of alpha orbits against the exceptional values");
  threegap->add_option("--alpha", alpha_text, "0 < alpha < 1, exact");
  threegap->add_option("--m1", m1_text, "run the correspondence for m2/m1");
  threegap->add_option("--m2", m2_text, "run the correspondence for m2/m1");
  threegap->add_option("--steps", steps, "points to place");
  threegap->add_option("--j-max", j_max, "orbit depth");

  CLI::App* table = app.add_subcommand(
      "table", "classification of every integer triple up to a bound");
  table->add_option("--max-m", max_m, "largest translation length")->required();
  table->add_flag("--csv", csv, "CSV instead of JSON");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*classify) return run_classify(targs, l0_text);
    if (*reduce) return run_reduce(targs);
    if (*realize) return run_realize(targs, twist, bridge);
    if (*verify) return run_verify(targs, twist, survey_len, no_survey, no_ping_pong);
    if (*sweep) return run_sweep(max_m, survey_len, threads);
    if (*threegap) return run_threegap(alpha_text, m1_text, m2_text, steps, j_max);
    if (*table) return run_table(max_m, csv);
  } catch (const num::parse_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 2;
}

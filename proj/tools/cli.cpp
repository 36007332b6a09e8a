#include "cli.hpp"

#include <CLI11.hpp>
#include <algorithm>
#include <charconv>
#include <cmath>
#include <complex>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <json.hpp>
#include <numbers>
#include <optional>
#include <ostream>
#include <random>
#include <sstream>

#include "audit.hpp"
#include "scl_lab/circle_lift.hpp"
#include "scl_lab/error.hpp"
#include "scl_lab/free_words.hpp"
#include "scl_lab/hyperbolic_estimates.hpp"
#include "scl_lab/quasimorphisms.hpp"
#include "scl_lab/scl_engine.hpp"
#include "scl_lab/sol_geometry.hpp"

namespace scl_lab::cli {

using Json = nlohmann::ordered_json;

namespace {

// ---------------------------------------------------------------- formatting

Json real(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return std::strtod(buf, nullptr);
}

Json exact(const Rational& r) { return r.str(); }
Json exact(const ExtRational& r) { return r.str(); }

Json pairs_json(const std::vector<CommutatorCertificate::Pair>& pairs) {
  Json out = Json::array();
  for (const auto& [x, y] : pairs) out.push_back(Json::array({x.str(), y.str()}));
  return out;
}

Json certificate_json(const CommutatorCertificate& c) {
  return Json{{"target", c.target().str()}, {"genus", c.genus()}, {"pairs", pairs_json(c.pairs())},
              {"verified", c.verify()}};
}

Json sol_element_json(const SolElement& e) {
  return Json{{"v", Json::array({e.v.x, e.v.y})}, {"t", e.t}};
}

Json sol_expression_json(const SolCommutatorExpression& e, const AnosovMatrix& A) {
  Json factors = Json::array();
  for (const auto& [x, y] : e.factors) factors.push_back(Json::array({sol_element_json(x), sol_element_json(y)}));
  return Json{{"target", sol_element_json(e.target)}, {"factors", factors}, {"factor_count", e.factors.size()},
              {"verified", e.verify(A)}};
}

void flatten(const Json& j, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& rows) {
  if (j.is_object()) {
    for (const auto& [k, v] : j.items()) flatten(v, prefix.empty() ? k : prefix + "." + k, rows);
  } else if (j.is_array() && !j.empty() && (j.front().is_object() || j.front().is_array())) {
    for (std::size_t i = 0; i < j.size(); ++i) flatten(j[i], prefix + "[" + std::to_string(i) + "]", rows);
  } else if (j.is_string()) {
    rows.emplace_back(prefix, j.get<std::string>());
  } else {
    rows.emplace_back(prefix, j.dump());
  }
}

// ------------------------------------------------------------------- parsing

std::int64_t parse_int(std::string_view text, std::size_t offset, const char* what) {
  std::int64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (ec != std::errc{} || ptr != end || text.empty()) {
    throw ParseError(std::string("malformed integer in ") + what, offset + static_cast<std::size_t>(ptr - text.data()));
  }
  return v;
}

double parse_real(std::string_view text, std::size_t offset, const char* what) {
  std::string s(text);
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw ParseError(std::string("malformed number in ") + what, offset + static_cast<std::size_t>(end - s.c_str()));
  }
  return v;
}

std::vector<std::pair<std::string_view, std::size_t>> split_commas(std::string_view text) {
  std::vector<std::pair<std::string_view, std::size_t>> parts;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = text.find(',', start);
    parts.emplace_back(text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start), start);
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return parts;
}

std::vector<std::int64_t> parse_int_list(std::string_view text, std::size_t expected, const char* what) {
  auto parts = split_commas(text);
  if (parts.size() != expected) {
    throw ParseError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated integers",
                     std::min(text.size(), parts.size() < expected ? text.size() : parts[expected].second - 1));
  }
  std::vector<std::int64_t> out;
  for (auto [p, off] : parts) out.push_back(parse_int(p, off, what));
  return out;
}

std::vector<double> parse_real_list(std::string_view text, std::size_t expected, const char* what) {
  auto parts = split_commas(text);
  if (expected != 0 && parts.size() != expected) {
    throw ParseError(std::string(what) + " needs " + std::to_string(expected) + " comma-separated numbers",
                     std::min(text.size(), parts.size() < expected ? text.size() : parts[expected].second - 1));
  }
  std::vector<double> out;
  for (auto [p, off] : parts) out.push_back(parse_real(p, off, what));
  return out;
}

AnosovMatrix parse_matrix(const std::string& text) {
  auto e = parse_int_list(text, 4, "matrix");
  return AnosovMatrix::make(e[0], e[1], e[2], e[3]);
}

IntVec2 parse_vector(const std::string& text) {
  auto e = parse_int_list(text, 2, "vector");
  return {e[0], e[1]};
}

SolElement parse_sol_element(const std::string& text) {
  auto e = parse_int_list(text, 3, "Sol element");
  return {{e[0], e[1]}, e[2]};
}

std::complex<double> parse_complex(const std::string& text, const char* what) {
  auto e = parse_real_list(text, 2, what);
  return {e[0], e[1]};
}

/// "p/q", an integer or a decimal.
double parse_turn(const std::string& text) {
  if (text.find('/') != std::string::npos) return Rational::parse(text).to_double();
  return parse_real(text, 0, "turn");
}

// -------------------------------------------------------------------- config

struct Config {
  std::optional<double> margulis_n;
  std::optional<double> margulis_2;
  SclBudget budget{};
};

Config load_config(const std::string& path) {
  Config cfg;
  if (path.empty()) return cfg;
  std::ifstream in(path);
  if (!in) throw InvalidInput("cannot open config file '" + path + "'");
  Json j;
  try {
    j = Json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError("malformed config JSON: " + std::string(e.what()), e.byte);
  }
  if (!j.is_object()) throw InvalidInput("config must be a JSON object");
  try {
    for (const auto& [key, value] : j.items()) {
      if (key == "margulis") {
        for (const auto& [mk, mv] : value.items()) {
          if (mk == "n") cfg.margulis_n = mv.get<double>();
          else if (mk == "2") cfg.margulis_2 = mv.get<double>();
          else if (mk != "comment") throw InvalidInput("unknown config key margulis." + mk);
        }
      } else if (key == "scl") {
        for (const auto& [sk, sv] : value.items()) {
          if (sk == "n_max") cfg.budget.n_max = sv.get<int>();
          else if (sk == "max_len") cfg.budget.max_len = sv.get<int>();
          else if (sk == "max_genus") cfg.budget.max_genus = sv.get<int>();
          else if (sk == "max_index_entries") cfg.budget.search.max_index_entries = sv.get<std::size_t>();
          else throw InvalidInput("unknown config key scl." + sk);
        }
      } else if (key != "comment") {
        throw InvalidInput("unknown config key " + key);
      }
    }
  } catch (const nlohmann::json::type_error& e) {
    throw InvalidInput("config value has the wrong type: " + std::string(e.what()));
  }
  return cfg;
}

unsigned threads_from_env() {
  const char* env = std::getenv("SCL_LAB_THREADS");
  if (env == nullptr) return 0;
  const std::string text(env);
  const auto v = parse_int(text, 0, "SCL_LAB_THREADS");
  if (v < 1) throw InvalidInput("SCL_LAB_THREADS must be a positive integer");
  return static_cast<unsigned>(v);
}

// ------------------------------------------------------------------ emitting

class Emitter {
 public:
  Emitter(std::ostream& out, bool table) : out_(out), table_(table) {}

  void emit(const std::string& command, Json inputs, Json result, std::vector<std::string> flags = {},
            std::optional<Json> certificates = std::nullopt) {
    Json record;
    record["command"] = command;
    record["inputs"] = std::move(inputs);
    record["result"] = std::move(result);
    if (certificates) record["certificates"] = std::move(*certificates);
    record["flags"] = flags;
    if (!table_) {
      out_ << record.dump() << '\n';
      return;
    }
    std::vector<std::pair<std::string, std::string>> rows;
    flatten(record, "", rows);
    std::size_t width = 0;
    for (const auto& r : rows) width = std::max(width, r.first.size());
    for (const auto& [k, v] : rows) out_ << std::left << std::setw(static_cast<int>(width) + 2) << k << v << '\n';
    out_ << '\n';
  }

 private:
  std::ostream& out_;
  bool table_;
};

// ---------------------------------------------------------------- subcommands

struct WordArgs {
  int rank = 2;
  std::string word;
  std::optional<std::int64_t> power;
  std::string conjugate_by;
  std::string commutator_with;
  std::string count;
};

int cmd_word(const WordArgs& a, Emitter& em) {
  const ReducedWord u = parse_word(a.word, a.rank);
  const CyclicReduction cr = cyclically_reduce(u);
  Json inputs{{"rank", a.rank}, {"word", a.word}};
  Json result{{"reduced", u.str()},
              {"length", u.size()},
              {"inverse", invert(u).str()},
              {"cyclic_core", cr.core.str()},
              {"conjugator", cr.conjugator.str()},
              {"abelianization", abelianization(u)},
              {"in_commutator_subgroup", in_commutator_subgroup(u)}};
  if (a.power) {
    inputs["power"] = *a.power;
    result["power"] = power(u, *a.power).str();
  }
  if (!a.conjugate_by.empty()) {
    inputs["conjugate_by"] = a.conjugate_by;
    result["conjugate"] = conjugate(u, parse_word(a.conjugate_by, a.rank)).str();
  }
  if (!a.commutator_with.empty()) {
    inputs["commutator_with"] = a.commutator_with;
    result["commutator"] = commutator(u, parse_word(a.commutator_with, a.rank)).str();
  }
  if (!a.count.empty()) {
    inputs["count"] = a.count;
    const ReducedWord w = parse_word(a.count, a.rank);
    result["disjoint_copies"] = count_disjoint_copies(w, u);
    if (!cr.core.empty()) result["cyclic_density"] = exact(count_disjoint_copies_cyclic(w, cr.core));
  }
  em.emit("word", inputs, result);
  return kExitOk;
}

struct BrooksArgs {
  int rank = 2;
  std::string w;
  std::string word;
  std::optional<std::int64_t> n;
};

int cmd_brooks(const BrooksArgs& a, Emitter& em) {
  const ReducedWord w = parse_word(a.w, a.rank);
  const ReducedWord u = parse_word(a.word, a.rank);
  const auto phi = brooks(w);
  const auto phi_bar = brooks_homogeneous(w);
  Json inputs{{"rank", a.rank}, {"w", a.w}, {"word", a.word}};
  Json result{{"value", exact(phi(u))},
              {"defect_upper", exact(phi.defect_upper())},
              {"homogenized", exact(phi_bar(u))},
              {"homogenized_defect_upper", exact(phi_bar.defect_upper())}};
  if (a.n) {
    inputs["n"] = *a.n;
    const auto est = homogenize_estimate(phi, u, *a.n);
    result["estimate"] = Json{{"value", exact(est.value)}, {"error_bound", exact(est.error_bound)}};
  }
  em.emit("brooks", inputs, result);
  return kExitOk;
}

struct DefectArgs {
  int rank = 2;
  std::string w;
  int budget = 5;
  std::uint64_t samples = 100000;
  std::uint64_t seed = 0;
  bool homogeneous = false;
};

int cmd_defect(const DefectArgs& a, Emitter& em) {
  const ReducedWord w = parse_word(a.w, a.rank);
  const auto phi = a.homogeneous ? brooks_homogeneous(w) : brooks(w);
  const DefectScan scan = defect_observed(phi, a.budget, a.samples, a.seed);
  Json inputs{{"rank", a.rank}, {"w", a.w}, {"budget", a.budget}, {"homogeneous", a.homogeneous},
              {"samples", a.samples}, {"seed", a.seed}};
  Json result{{"observed", exact(scan.observed)},
              {"defect_upper", exact(phi.defect_upper())},
              {"pairs_tested", scan.pairs_tested},
              {"exhaustive", scan.exhaustive},
              {"worst_pair", Json::array({scan.worst_a.str(), scan.worst_b.str()})},
              {"violations", 0}};
  std::vector<std::string> flags;
  if (!scan.exhaustive) flags.emplace_back("sampled");
  em.emit("defect", inputs, result, flags);
  return kExitOk;
}

struct SclArgs {
  int rank = 2;
  std::string word;
  std::optional<int> n_max, max_len, max_genus;
  std::string inverse_conjugator;
  std::int64_t power = 1;
};

int cmd_scl(const SclArgs& a, const Config& cfg, unsigned threads, Emitter& em) {
  const ReducedWord u = parse_word(a.word, a.rank);
  Json inputs{{"rank", a.rank}, {"word", a.word}};
  if (!a.inverse_conjugator.empty()) {
    const ReducedWord c = parse_word(a.inverse_conjugator, a.rank);
    inputs["inverse_conjugator"] = a.inverse_conjugator;
    inputs["power"] = a.power;
    const auto cert = scl_zero_by_inverse_conjugacy(u, c, a.power);
    em.emit("scl", inputs, Json{{"scl", "0"}, {"power", 2 * a.power}}, {}, certificate_json(cert));
    return kExitOk;
  }
  SclBudget budget = cfg.budget;
  if (a.n_max) budget.n_max = *a.n_max;
  if (a.max_len) budget.max_len = *a.max_len;
  if (a.max_genus) budget.max_genus = *a.max_genus;
  budget.search.threads = threads;
  inputs["budget"] = Json{{"n_max", budget.n_max}, {"max_len", budget.max_len}, {"max_genus", budget.max_genus}};

  const SclReport r = scl_report(u, budget);
  Json result{{"lower", exact(r.lower)},
              {"upper", exact(r.upper)},
              {"lower_decimal", real(r.lower.to_double())},
              {"upper_decimal", real(r.upper.to_double())},
              {"status", to_string(r.status)}};
  if (r.lower_witness) {
    result["lower_witness"] = Json{{"brooks_word", r.lower_witness->witness.str()},
                                   {"homogenized_value", exact(r.lower_witness->value)},
                                   {"defect_upper", exact(kHomogenizedBrooksDefect)}};
  }
  Json attempts = Json::array();
  for (const auto& at : r.attempts) {
    attempts.push_back(Json{{"n", at.n},
                            {"genus", at.genus ? Json(*at.genus) : Json(nullptr)},
                            {"running_min", exact(at.running_min)}});
  }
  result["attempts"] = attempts;
  std::optional<Json> certs;
  if (r.upper_witness) {
    const auto& [n, cl] = *r.upper_witness;
    result["upper_witness"] = Json{{"n", n}, {"genus", cl.genus}};
    certs = Json::array({certificate_json(cl.certificate)});
  }
  em.emit("scl", inputs, result, r.flags, certs);
  return r.status == SclStatus::inconclusive ? kExitInconclusive : kExitOk;
}

struct ClArgs {
  int rank = 2;
  std::string word;
  int max_genus = 2;
  int max_len = 6;
  std::int64_t power = 1;
};

int cmd_cl(const ClArgs& a, unsigned threads, Emitter& em) {
  if (a.power < 1) throw InvalidInput("power must be >= 1");
  const ReducedWord base = parse_word(a.word, a.rank);
  const ReducedWord u = power(base, a.power);
  Json inputs{{"rank", a.rank}, {"word", a.word}, {"power", a.power}, {"max_genus", a.max_genus},
              {"max_len", a.max_len}};
  SearchOptions opts;
  opts.threads = threads;
  const auto found = cl_upper(u, a.max_genus, a.max_len, opts);
  Json result;
  if (!u.empty()) {
    const auto bav = scl_lower_bavard(u, default_brooks_dictionary(u));
    result["lower"] = cl_lower_from_qm(u, brooks_homogeneous(bav.witness));
    result["lower_witness"] = bav.witness.str();
  } else {
    result["lower"] = 0;
  }
  if (!found) {
    result["upper"] = nullptr;
    em.emit("cl", inputs, result, {"budget-exhausted"});
    return kExitInconclusive;
  }
  result["upper"] = found->genus;
  result["scl_upper"] = exact(scl_upper_from_power(base, a.power, *found));
  em.emit("cl", inputs, result, {}, Json::array({certificate_json(found->certificate)}));
  return kExitOk;
}

struct RotArgs {
  std::string matrix;
  std::string turn;
  std::int64_t branch = 0;
  std::int64_t n = 1000;
  std::string conjugate_by;
};

int cmd_rot(const RotArgs& a, Emitter& em) {
  if (a.matrix.empty() == a.turn.empty()) throw InvalidInput("rot needs exactly one of --matrix or --turn");
  Mat2 m;
  Json inputs;
  if (!a.matrix.empty()) {
    auto e = parse_real_list(a.matrix, 4, "matrix");
    m = {e[0], e[1], e[2], e[3]};
    inputs["matrix"] = a.matrix;
  } else {
    m = rotation_matrix(std::numbers::pi * parse_turn(a.turn));
    inputs["turn"] = a.turn;
  }
  inputs["branch"] = a.branch;
  inputs["n"] = a.n;
  CircleLift f = lift_from_matrix(m, a.branch);
  Json result;
  const auto est = rotation_number(f, a.n);
  result["value"] = real(est.value);
  result["error_bound"] = real(est.error_bound);
  result["lift_at_zero"] = real(f.base_value());
  if (!a.conjugate_by.empty()) {
    auto e = parse_real_list(a.conjugate_by, 4, "conjugating matrix");
    const Mat2 h{e[0], e[1], e[2], e[3]};
    const CircleLift hl = lift_from_matrix(h, 0);
    const auto conj = rotation_number(compose(compose(hl, f), inverse(hl)), a.n);
    inputs["conjugate_by"] = a.conjugate_by;
    result["conjugate_value"] = real(conj.value);
  }
  em.emit("rot", inputs, result, {"approximate"});
  return kExitOk;
}

struct TubeArgs {
  double length = 0;
  double radius = 0;
  std::optional<int> dimension;
  std::optional<double> reznikov_constant;
  std::string triangle;
};

int cmd_tube(const TubeArgs& a, Emitter& em) {
  const TubeParams t = TubeParams::make(a.length, a.radius);
  const auto qm = tube_qm_value(t);
  Json inputs{{"length", real(a.length)}, {"radius", real(a.radius)}};
  Json result{{"qm_value", real(qm.value)},
              {"qm_defect_upper", real(qm.defect_upper)},
              {"scl_lower", real(scl_lower_from_tube(t))},
              {"area", real(tube_area(t))},
              {"hk_min_core_length", real(hk_min_core_length(a.radius))}};
  if (a.dimension || a.reznikov_constant) {
    if (!a.dimension || !a.reznikov_constant) throw InvalidInput("--dimension and --reznikov-constant go together");
    inputs["dimension"] = *a.dimension;
    inputs["reznikov_constant"] = real(*a.reznikov_constant);
    result["reznikov_radius_lower"] = real(reznikov_radius_lower_bound(a.length, *a.dimension, *a.reznikov_constant));
  }
  if (!a.triangle.empty()) {
    auto e = parse_real_list(a.triangle, 3, "triangle angles");
    inputs["triangle"] = a.triangle;
    result["triangle_area"] = real(ideal_triangle_area(e[0], e[1], e[2]));
  }
  em.emit("tube", inputs, result);
  return kExitOk;
}

int cmd_hk(double radius, Emitter& em) {
  em.emit("hk", Json{{"radius", real(radius)}}, Json{{"min_core_length", real(hk_min_core_length(radius))}});
  return kExitOk;
}

struct SurgeryAArgs {
  std::int64_t chi = -1;
  std::int64_t multiplicity = 1;
  double radius = 2;
  std::int64_t p = 1;
};

int cmd_surgery_a(const SurgeryAArgs& a, Emitter& em) {
  const SurfaceData s = SurfaceData::make(a.chi, a.multiplicity);
  Json inputs{{"chi", a.chi}, {"multiplicity", a.multiplicity}, {"radius", real(a.radius)}, {"p", a.p}};
  Json result{{"chi_q", exact(s.chi_q())},
              {"length_bound", real(theorem_a_length_bound(s, a.radius, a.p))},
              {"scl_upper", exact(scl_upper_from_surgery(s, a.p))}};
  em.emit("surgery-a", inputs, result);
  return kExitOk;
}

int cmd_surgery_b(double meridian_length, const std::string& variant, Emitter& em) {
  GenusVariant v;
  if (variant == "paper") v = GenusVariant::paper;
  else if (variant == "boroczky") v = GenusVariant::boroczky;
  else throw InvalidInput("variant must be 'paper' or 'boroczky'");
  em.emit("surgery-b", Json{{"meridian_length", real(meridian_length)}, {"variant", variant}},
          Json{{"neg_chi_q_lower", real(theorem_b_genus_bound(meridian_length, v))}});
  return kExitOk;
}

struct NzArgs {
  std::string meridian;
  std::string longitude;
  std::int64_t p = 1;
  std::int64_t q = 0;
};

int cmd_nz(const NzArgs& a, Emitter& em) {
  const CuspShape c = CuspShape::make(parse_complex(a.meridian, "meridian"), parse_complex(a.longitude, "longitude"));
  const SurgeryCoeffs s = SurgeryCoeffs::make(a.p, a.q);
  const auto len = nz_core_length(c, s);
  Json inputs{{"meridian", a.meridian}, {"longitude", a.longitude}, {"p", a.p}, {"q", a.q}};
  Json result{{"quadratic_form", real(nz_quadratic_form(c, s))}, {"core_length", real(len.value)}};
  em.emit("nz", inputs, result, {"approximate"});
  return kExitOk;
}

struct GapArgs {
  std::optional<std::int64_t> m, g;
  std::optional<double> epsilon;
  std::string variant = "theorem_c";
  bool optimal = false;
  double cap = 1.0;
  std::optional<double> margulis_n, margulis_2;
};

int cmd_gap(const GapArgs& a, const Config& cfg, Emitter& em) {
  GapVariant v;
  if (a.variant == "theorem_c") v = GapVariant::theorem_c;
  else if (a.variant == "theorem_d") v = GapVariant::theorem_d;
  else throw InvalidInput("variant must be 'theorem_c' or 'theorem_d'");
  Json inputs{{"variant", a.variant}};
  Json result = Json::object();
  double eps = 0;
  if (a.optimal) {
    const auto choice = optimal_epsilon(a.cap);
    inputs["cap"] = real(a.cap);
    result["epsilon"] = real(choice.epsilon);
    result["min_constant"] = real(choice.min_constant);
    eps = choice.epsilon;
  }
  if (a.epsilon) eps = *a.epsilon;
  if (a.m || a.g) {
    if (!a.m || !a.g) throw InvalidInput("--m and --g go together");
    if (!a.optimal && !a.epsilon) throw InvalidInput("gap bound needs --epsilon or --optimal");
    GapParams gp{*a.m, *a.g, eps, a.margulis_n ? a.margulis_n : cfg.margulis_n,
                 a.margulis_2 ? a.margulis_2 : cfg.margulis_2};
    inputs["m"] = gp.m;
    inputs["g"] = gp.g;
    inputs["epsilon"] = real(eps);
    if (gp.margulis_n) inputs["margulis_n"] = real(*gp.margulis_n);
    if (gp.margulis_2) inputs["margulis_2"] = real(*gp.margulis_2);
    result["length_bound"] = real(length_gap_bound(gp, v));
  } else if (!a.optimal) {
    throw InvalidInput("gap needs --m/--g or --optimal");
  }
  em.emit("gap", inputs, result);
  return kExitOk;
}

struct SolArgs {
  std::string matrix;
  std::string vector;
  std::int64_t power = 1;
  int max_depth = 64;
  std::string left, right;
  std::string b, c;
  std::int64_t search_bound = 3;
};

int cmd_sol(const std::string& action, const SolArgs& a, Emitter& em) {
  const AnosovMatrix A = parse_matrix(a.matrix);
  Json inputs{{"matrix", a.matrix}};
  if (action == "mul") {
    const SolElement x = parse_sol_element(a.left), y = parse_sol_element(a.right);
    inputs["left"] = a.left;
    inputs["right"] = a.right;
    em.emit("sol mul", inputs,
            Json{{"product", sol_element_json(sol_mul(x, y, A))}, {"commutator", sol_element_json(sol_commutator(x, y, A))}});
    return kExitOk;
  }
  if (action == "conj") {
    const SolElement b = parse_sol_element(a.b);
    inputs["b"] = a.b;
    inputs["power"] = a.power;
    if (!a.c.empty()) {
      inputs["c"] = a.c;
      const auto expr = scl_zero_by_inverse_conjugacy(b, parse_sol_element(a.c), a.power, A);
      em.emit("sol conj", inputs, Json{{"scl", "0"}}, {}, sol_expression_json(expr, A));
      return kExitOk;
    }
    inputs["search_bound"] = a.search_bound;
    const auto c = find_inverse_conjugator(b, A, a.search_bound, a.search_bound);
    if (!c) {
      em.emit("sol conj", inputs, Json{{"found", false}}, {"budget-exhausted"});
      return kExitInconclusive;
    }
    const auto expr = scl_zero_by_inverse_conjugacy(b, *c, a.power, A);
    em.emit("sol conj", inputs, Json{{"found", true}, {"c", sol_element_json(*c)}, {"scl", "0"}}, {},
            sol_expression_json(expr, A));
    return kExitOk;
  }

  const IntVec2 v = parse_vector(a.vector);
  inputs["vector"] = a.vector;
  if (action == "member") {
    const auto u = membership_commutator_subgroup(v, A);
    Json result{{"member", u.has_value()}};
    if (u) result["u"] = Json::array({u->x, u->y});
    em.emit("sol member", inputs, result);
  } else if (action == "cert") {
    inputs["power"] = a.power;
    const auto expr = a.power == 1 ? commutator_certificate(v, A) : commutator_certificate_power(v, a.power, A);
    em.emit("sol cert", inputs, Json{{"cl_upper", expr.factors.size()}, {"verified", expr.verify(A)}}, {},
            sol_expression_json(expr, A));
  } else if (action == "report") {
    const auto r = sol_scl_report(v, A);
    Json result{{"member", r.member}, {"scl", exact(r.scl)}};
    if (r.rational_solution) {
      result["solution"] = Json::array({exact(r.rational_solution->first), exact(r.rational_solution->second)});
    }
    result["power_in_commutator_subgroup"] = r.power_in_commutator_subgroup;
    std::optional<Json> certs;
    if (r.certificate) certs = sol_expression_json(*r.certificate, A);
    em.emit("sol report", inputs, result, {}, certs);
  } else if (action == "decompose") {
    inputs["max_depth"] = a.max_depth;
    const SolDecomposer dec(A);
    const auto d = dec.decompose(v, a.max_depth);
    Json trace = Json::array();
    for (const auto& s : d.trace) {
      trace.push_back(Json{{"input", Json::array({s.input.x, s.input.y})},
                           {"k1", s.expand_power},
                           {"b1", Json::array({s.expand_part.x, s.expand_part.y})},
                           {"k2", s.contract_power},
                           {"b2", Json::array({s.contract_part.x, s.contract_part.y})},
                           {"remainder", Json::array({s.remainder.x, s.remainder.y})},
                           {"next", Json::array({s.next.x, s.next.y})}});
    }
    const auto& k = d.constants;
    Json result{{"complete", d.complete},
                {"factor_count", d.expression.factors.size()},
                {"depth", d.trace.size()},
                {"constants", Json{{"lambda", real(k.lambda)},
                                   {"contraction", real(k.contraction)},
                                   {"offset", real(k.offset)},
                                   {"conjugate_bound", k.conjugate_bound},
                                   {"base_bound", k.base_bound}}},
                {"trace", trace}};
    std::vector<std::string> flags;
    if (!d.complete) flags.emplace_back("budget-exhausted");
    em.emit("sol decompose", inputs, result, flags, sol_expression_json(d.expression, A));
    return d.complete ? kExitOk : kExitInconclusive;
  } else {
    throw InvalidInput("unknown sol action '" + action + "'");
  }
  return kExitOk;
}

struct AuditArgs {
  std::string radii;
  double grid_start = 2.0;
  double grid_end = 10.0;
  int grid_points = 1000;
  std::uint64_t seed = 0;
  int oracle_word_len = 4;
  int oracle_target_len = 12;
  int defect_budget = 5;
};

int cmd_audit(const AuditArgs& a, Emitter& em) {
  std::vector<double> grid;
  if (!a.radii.empty()) {
    grid = parse_real_list(a.radii, 0, "radii");
  } else {
    if (a.grid_points < 1) throw InvalidInput("grid needs at least one point");
    for (int k = 1; k <= a.grid_points; ++k) {
      grid.push_back(a.grid_start + (a.grid_end - a.grid_start) * k / a.grid_points);
    }
  }
  // Validate every precondition before running anything.
  for (double t : grid) {
    if (!(t > 2)) throw InvalidInput("audit radius must be > 2 (precondition T > 2), got " + std::to_string(t));
  }
  bool all_ok = true;

  const TheoremAAudit ta = theorem_a_audit(grid);
  all_ok = all_ok && ta.passed();
  em.emit("audit", Json{{"check", "surgery-length-inequalities"}, {"grid_points", grid.size()}},
          Json{{"passed", ta.passed()},
               {"violations", ta.violations},
               {"min_cosh_tanh_margin", real(ta.min_cosh_tanh_margin)},
               {"min_sinh_margin", real(ta.min_sinh_margin)},
               {"min_radius_margin", real(ta.min_radius_margin)}});

  const auto nz = audit::nz_limit_check(10, 1000, 1, a.seed);
  all_ok = all_ok && nz.passed;
  em.emit("audit", Json{{"check", "nz-limit"}, {"cusps", 10}, {"p", 1000}, {"q", 1}, {"seed", a.seed}},
          Json{{"passed", nz.passed}, {"max_relative_error", real(nz.max_relative_error)}});

  for (const char* w : {"ab", "abAB"}) {
    const auto d = audit::brooks_defect_check(parse_word(w, 2), a.defect_budget);
    all_ok = all_ok && d.passed;
    em.emit("audit", Json{{"check", "brooks-defect"}, {"w", w}, {"budget", a.defect_budget}},
            Json{{"passed", d.passed}, {"observed", exact(d.observed)}, {"pairs", d.pairs}, {"violations", d.violations}});
  }

  const auto g = audit::greedy_oracle_check(2, a.oracle_word_len, a.oracle_target_len);
  all_ok = all_ok && g.passed;
  em.emit("audit",
          Json{{"check", "greedy-counting-oracle"}, {"max_w_len", a.oracle_word_len}, {"max_a_len", a.oracle_target_len}},
          Json{{"passed", g.passed}, {"cases", g.cases}, {"mismatches", g.mismatches}});

  return all_ok ? kExitOk : kExitFailure;
}

// ---------------------------------------------------------------------- main

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Stable commutator length toolkit", "scl_lab"};
  app.fallthrough();
  app.require_subcommand(1);
  std::string config_path;
  bool table = false;
  app.add_option("--config", config_path, "JSON config: Margulis constants and scl search budgets");
  app.add_flag("--table", table, "Human-readable table output");

  WordArgs word_args;
  auto* word = app.add_subcommand("word", "Free-group word algebra");
  word->add_option("--rank", word_args.rank)->check(CLI::PositiveNumber);
  word->add_option("--word", word_args.word)->required();
  word->add_option("--power", word_args.power);
  word->add_option("--conjugate-by", word_args.conjugate_by);
  word->add_option("--commutator-with", word_args.commutator_with);
  word->add_option("--count", word_args.count, "Count disjoint copies of this word");

  BrooksArgs brooks_args;
  auto* brooks_cmd = app.add_subcommand("brooks", "Brooks counting quasimorphism");
  brooks_cmd->add_option("--rank", brooks_args.rank)->check(CLI::PositiveNumber);
  brooks_cmd->add_option("--w", brooks_args.w, "Counted word")->required();
  brooks_cmd->add_option("--word", brooks_args.word, "Argument")->required();
  brooks_cmd->add_option("--n", brooks_args.n, "Power for the homogenization estimate");

  DefectArgs defect_args;
  auto* defect = app.add_subcommand("defect", "Observed defect of a Brooks quasimorphism");
  defect->add_option("--rank", defect_args.rank)->check(CLI::PositiveNumber);
  defect->add_option("--w", defect_args.w)->required();
  defect->add_option("--budget", defect_args.budget, "Maximum word length in the scan");
  defect->add_option("--samples", defect_args.samples);
  defect->add_option("--seed", defect_args.seed);
  defect->add_flag("--homogeneous", defect_args.homogeneous);

  SclArgs scl_args;
  auto* scl = app.add_subcommand("scl", "Two-sided scl bounds");
  scl->add_option("--rank", scl_args.rank)->check(CLI::PositiveNumber);
  scl->add_option("--word", scl_args.word)->required();
  scl->add_option("--n-max", scl_args.n_max);
  scl->add_option("--max-len", scl_args.max_len);
  scl->add_option("--max-genus", scl_args.max_genus);
  scl->add_option("--inverse-conjugator", scl_args.inverse_conjugator, "c with c w^-1 c^-1 = w; certifies scl = 0");
  scl->add_option("--power", scl_args.power);

  ClArgs cl_args;
  auto* cl = app.add_subcommand("cl", "Commutator length search");
  cl->add_option("--rank", cl_args.rank)->check(CLI::PositiveNumber);
  cl->add_option("--word", cl_args.word)->required();
  cl->add_option("--max-genus", cl_args.max_genus);
  cl->add_option("--max-len", cl_args.max_len);
  cl->add_option("--power", cl_args.power);

  RotArgs rot_args;
  auto* rot = app.add_subcommand("rot", "Rotation number of a projective circle map");
  rot->add_option("--matrix", rot_args.matrix, "a,b,c,d with determinant 1");
  rot->add_option("--turn", rot_args.turn, "Rigid rotation of RP^1 by this fraction of a turn");
  rot->add_option("--branch", rot_args.branch);
  rot->add_option("--n", rot_args.n)->check(CLI::PositiveNumber);
  rot->add_option("--conjugate-by", rot_args.conjugate_by);

  TubeArgs tube_args;
  auto* tube = app.add_subcommand("tube", "Tube quasimorphism and tube geometry");
  tube->add_option("--length", tube_args.length)->required();
  tube->add_option("--radius", tube_args.radius)->required();
  tube->add_option("--dimension", tube_args.dimension);
  tube->add_option("--reznikov-constant", tube_args.reznikov_constant);
  tube->add_option("--triangle", tube_args.triangle, "alpha,beta,gamma");

  double hk_radius = 0;
  auto* hk = app.add_subcommand("hk", "Least core length for a tube radius");
  hk->add_option("--radius", hk_radius)->required();

  SurgeryAArgs sa_args;
  auto* surgery_a = app.add_subcommand("surgery-a", "Surgery length bound and scl upper bound");
  surgery_a->add_option("--chi", sa_args.chi)->required();
  surgery_a->add_option("--multiplicity", sa_args.multiplicity);
  surgery_a->add_option("--radius", sa_args.radius)->required();
  surgery_a->add_option("--p", sa_args.p)->required();

  double sb_length = 0;
  std::string sb_variant = "paper";
  auto* surgery_b = app.add_subcommand("surgery-b", "Genus lower bound from meridian length");
  surgery_b->add_option("--meridian-length", sb_length)->required();
  surgery_b->add_option("--variant", sb_variant);

  NzArgs nz_args;
  auto* nz = app.add_subcommand("nz", "Cusp quadratic form and filled core length");
  nz->add_option("--meridian", nz_args.meridian, "re,im")->required();
  nz->add_option("--longitude", nz_args.longitude, "re,im")->required();
  nz->add_option("--p", nz_args.p)->required();
  nz->add_option("--q", nz_args.q)->required();

  GapArgs gap_args;
  auto* gap = app.add_subcommand("gap", "Spectral-gap length bound");
  gap->add_option("--m", gap_args.m);
  gap->add_option("--g", gap_args.g);
  gap->add_option("--epsilon", gap_args.epsilon);
  gap->add_option("--variant", gap_args.variant);
  gap->add_flag("--optimal", gap_args.optimal);
  gap->add_option("--cap", gap_args.cap);
  gap->add_option("--margulis-n", gap_args.margulis_n);
  gap->add_option("--margulis-2", gap_args.margulis_2);

  SolArgs sol_args;
  std::string sol_action;
  auto* sol = app.add_subcommand("sol", "Sol lattice arithmetic and certificates");
  sol->add_option("action", sol_action, "cert | member | report | decompose | mul | conj")->required();
  sol->add_option("--matrix", sol_args.matrix, "a,b,c,d")->required();
  sol->add_option("--vector", sol_args.vector, "x,y");
  sol->add_option("--power", sol_args.power);
  sol->add_option("--max-depth", sol_args.max_depth);
  sol->add_option("--left", sol_args.left, "x,y,t");
  sol->add_option("--right", sol_args.right, "x,y,t");
  sol->add_option("--b", sol_args.b, "x,y,t");
  sol->add_option("--c", sol_args.c, "x,y,t");
  sol->add_option("--search-bound", sol_args.search_bound);

  AuditArgs audit_args;
  auto* audit_cmd = app.add_subcommand("audit", "Inequality and oracle audits");
  audit_cmd->add_option("--radii", audit_args.radii, "Comma-separated radii, each > 2");
  audit_cmd->add_option("--grid-start", audit_args.grid_start);
  audit_cmd->add_option("--grid-end", audit_args.grid_end);
  audit_cmd->add_option("--grid-points", audit_args.grid_points);
  audit_cmd->add_option("--seed", audit_args.seed);
  audit_cmd->add_option("--oracle-word-len", audit_args.oracle_word_len);
  audit_cmd->add_option("--oracle-target-len", audit_args.oracle_target_len);
  audit_cmd->add_option("--defect-budget", audit_args.defect_budget);

  std::vector<const char*> argv{"scl_lab"};
  for (const auto& s : args) argv.push_back(s.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "scl_lab: error: " << e.what() << '\n';
    return kExitInvalid;
  }

  try {
    const Config cfg = load_config(config_path);
    const unsigned threads = threads_from_env();
    Emitter em(out, table);
    if (*word) return cmd_word(word_args, em);
    if (*brooks_cmd) return cmd_brooks(brooks_args, em);
    if (*defect) return cmd_defect(defect_args, em);
    if (*scl) return cmd_scl(scl_args, cfg, threads, em);
    if (*cl) return cmd_cl(cl_args, threads, em);
    if (*rot) return cmd_rot(rot_args, em);
    if (*tube) return cmd_tube(tube_args, em);
    if (*hk) return cmd_hk(hk_radius, em);
    if (*surgery_a) return cmd_surgery_a(sa_args, em);
    if (*surgery_b) return cmd_surgery_b(sb_length, sb_variant, em);
    if (*nz) return cmd_nz(nz_args, em);
    if (*gap) return cmd_gap(gap_args, cfg, em);
    if (*sol) return cmd_sol(sol_action, sol_args, em);
    if (*audit_cmd) return cmd_audit(audit_args, em);
    err << "scl_lab: error: unknown subcommand\n";
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    err << "scl_lab: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::domain_error& e) {
    err << "scl_lab: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const std::overflow_error& e) {
    err << "scl_lab: error: " << e.what() << '\n';
    return kExitInvalid;
  } catch (const BudgetExhausted& e) {
    err << "scl_lab: inconclusive: " << e.what() << '\n';
    return kExitInconclusive;
  } catch (const CertificateFailure& e) {
    err << "scl_lab: certificate failure: " << e.what() << '\n';
    return kExitFailure;
  }
}

}  // namespace scl_lab::cli

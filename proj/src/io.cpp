#include "ballmaps/io.hpp"

#include <fstream>
#include <iostream>
#include <iterator>

namespace ballmaps {

namespace {

const Json& require(const Json& j, const char* key) {
  if (!j.is_object() || !j.contains(key)) throw InputError(std::string("missing field \"") + key + "\"");
  return j.at(key);
}

std::size_t size_field(const Json& j, const char* key) {
  const auto& v = require(j, key);
  if (!v.is_number_integer() || v.get<long long>() < 0) throw InputError(std::string("field \"") + key + "\" must be a non-negative integer");
  return v.get<std::size_t>();
}

Json index_list(const std::vector<std::size_t>& v) {
  Json out = Json::array();
  for (auto x : v) out.push_back(x + 1);
  return out;
}

}  // namespace

Json to_json(Complex c) { return Json::array({c.real(), c.imag()}); }

Json to_json(const Polynomial& p) {
  Json terms = Json::array();
  for (const auto& [alpha, c] : p.terms()) terms.push_back({{"exp", alpha.exponents()}, {"re", c.real()}, {"im", c.imag()}});
  return {{"nvars", p.nvars()}, {"terms", terms}};
}

Json to_json(const RationalMap& f) {
  Json num = Json::array();
  for (const auto& p : f.numerator()) num.push_back(to_json(p));
  Json j = {{"n", f.n()}, {"m", f.m()}, {"l", f.l()}, {"numerator", num}, {"denominator", to_json(f.denominator())}};
  const auto w = f.warnings();
  if (!w.empty()) j["warnings"] = w;
  return j;
}

Json to_json(const HermitianForm& h) {
  Json entries = Json::array();
  for (const auto& [key, c] : h.entries()) {
    if (key.second < key.first) continue;
    entries.push_back({{"alpha", key.first.exponents()}, {"beta", key.second.exponents()}, {"re", c.real()}, {"im", c.imag()}});
  }
  return {{"nvars", h.nvars()}, {"entries", entries}};
}

Json to_json(const Matrix& m) {
  Json rows = Json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(to_json(m(r, c)));
    rows.push_back(row);
  }
  return rows;
}

Json to_json(const ProperCertificate& c) {
  return {{"proper", c.proper}, {"residual", c.residual}, {"threshold", c.threshold}, {"quotient", to_json(c.quotient)}};
}

Json to_json(const Signature& s) {
  return {{"positive", s.positive},
          {"negative", s.negative},
          {"zero", s.zero},
          {"rank", s.rank()},
          {"spectral_norm", s.spectral_norm},
          {"threshold", s.threshold},
          {"min_nonzero_rel", s.min_nonzero_rel},
          {"max_zero_rel", s.max_zero_rel}};
}

Json to_json(const TorusSubgroup& t) {
  Json j = {{"n", t.n},
            {"lattice", t.lattice},
            {"torus_dim", t.torus_dim},
            {"finite_orders", t.finite_orders},
            {"generator_angles", t.finite_generators},
            {"torus_directions", t.torus_directions},
            {"trivial", t.is_trivial()},
            {"full_torus", t.is_full_torus()}};
  j["order"] = t.torus_dim == 0 ? Json(t.order()) : Json(nullptr);
  return j;
}

Json to_json(const BlockPartition& b) {
  Json out = Json::array();
  for (const auto& block : b.blocks) out.push_back(index_list(block));
  return out;
}

Json to_json(const MembershipResult& r) {
  return {{"member", r.member}, {"c_gamma", r.c_gamma}, {"residual", r.residual}, {"threshold", r.threshold}};
}

Json permutation_to_json(const Permutation& p) {
  Json out = Json::array();
  for (int x : p) out.push_back(x + 1);
  return out;
}

Json to_json(const GroupReport& r) {
  Json j;
  j["torus_invariant"] = r.torus.invariant;
  if (r.torus.monomial_form) {
    Json terms = Json::array();
    for (const auto& t : *r.torus.monomial_form) terms.push_back({{"weight", t.weight}, {"exponent", t.exponent.exponents()}});
    j["monomial_form"] = terms;
  }
  j["full_unitary_invariant"] = r.full_unitary.invariant;
  if (r.full_unitary.powers) {
    Json terms = Json::array();
    for (const auto& t : *r.full_unitary.powers) terms.push_back({{"weight", t.weight}, {"power", t.power}});
    j["powers"] = terms;
  }
  j["target_normalized"] = r.full_unitary.target_normalized;
  j["block_partition"] = to_json(r.blocks);
  j["diagonal_stabilizer"] = to_json(r.diagonal);
  if (r.permutations) {
    Json perms = Json::array();
    for (const auto& p : *r.permutations) perms.push_back(permutation_to_json(p));
    j["permutation_stabilizer"] = perms;
  } else {
    j["permutation_stabilizer"] = nullptr;
  }
  j["source_rank_upper"] = r.source_rank_upper;
  j["origin_moving_excluded"] = r.origin_moving_excluded;
  j["notes"] = r.notes;
  return j;
}

Json to_json(const StrictStabilizer& s) {
  Json perms = Json::array();
  for (const auto& p : s.permutations) perms.push_back(permutation_to_json(p));
  Json gens = Json::array();
  for (const auto& g : s.generators) gens.push_back(to_json(g));
  Json j = {{"diagonal", to_json(s.diagonal)},
            {"permutations", perms},
            {"permutations_checked", s.permutations_checked},
            {"generators", gens}};
  j["order"] = s.order ? Json(*s.order) : Json(nullptr);
  return j;
}

Json to_json(const InvarianceSystem& s) {
  Json eqs = Json::array();
  for (const auto& e : s.equations) {
    Json monomials = Json::array(), re = Json::array(), im = Json::array();
    for (const auto& [alpha, c] : e.poly.terms()) {
      monomials.push_back(alpha.exponents());
      re.push_back(c.real());
      im.push_back(c.imag());
    }
    eqs.push_back({{"kind", e.kind},
                   {"x_alpha", e.x_alpha.exponents()},
                   {"x_beta", e.x_beta.exponents()},
                   {"monomials", monomials},
                   {"re", re},
                   {"im", im}});
  }
  return {{"n", s.n},
          {"degree", s.degree},
          {"convention", "row vector x = (z, s) maps to x U; unknowns are u_ab row-major, then their conjugates"},
          {"unknowns", s.unknowns},
          {"equations", eqs}};
}

Json to_json(const PadResult& r) {
  Json q = Json::array();
  for (const auto& p : r.q) q.push_back(to_json(p));
  return {{"epsilon", r.epsilon}, {"epsilon_sup", r.epsilon_sup}, {"lambda", r.lambda},
          {"powers", r.powers},   {"q", q},                       {"map", to_json(r.map)}};
}

Json to_json(const Tolerances& t) { return {{"eq", t.eq}, {"div", t.div}, {"sig", t.sig}, {"group", t.group}}; }

Complex complex_from_json(const Json& j) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
  if (j.is_object() && j.contains("re")) {
    const double im = j.contains("im") ? j.at("im").get<double>() : 0.0;
    return {j.at("re").get<double>(), im};
  }
  throw InputError("expected a complex number");
}

Polynomial polynomial_from_json(const Json& j) {
  const std::size_t n = size_field(j, "nvars");
  const auto& terms = require(j, "terms");
  if (!terms.is_array()) throw InputError("\"terms\" must be an array");
  Polynomial p(n);
  for (const auto& t : terms) {
    const auto& e = require(t, "exp");
    if (!e.is_array() || e.size() != n) throw InputError("exponent length differs from nvars");
    std::vector<int> exps;
    for (const auto& x : e) {
      if (!x.is_number_integer() || x.get<int>() < 0) throw InputError("exponents must be non-negative integers");
      exps.push_back(x.get<int>());
    }
    const double re = t.contains("re") ? t.at("re").get<double>() : 0.0;
    const double im = t.contains("im") ? t.at("im").get<double>() : 0.0;
    p.add_term(MultiIndex(exps), {re, im});
  }
  return p;
}

RationalMap map_from_json(const Json& j) {
  if (j.is_object() && j.contains("map") && !j.contains("numerator")) return map_from_json(j.at("map"));
  const auto& num = require(j, "numerator");
  if (!num.is_array() || num.empty()) throw InputError("\"numerator\" must be a non-empty array");
  std::vector<Polynomial> comps;
  for (const auto& p : num) comps.push_back(polynomial_from_json(p));
  const std::size_t n = j.contains("n") ? size_field(j, "n") : comps.front().nvars();
  const std::size_t l = j.contains("l") ? size_field(j, "l") : 0;
  if (j.contains("m") && size_field(j, "m") + l != comps.size()) throw InputError("m + l differs from the numerator length");
  Polynomial den = j.contains("denominator") ? polynomial_from_json(j.at("denominator")) : Polynomial::constant(n, 1.0);
  for (const auto& p : comps) {
    if (p.nvars() != n) throw InputError("component nvars differs from n");
  }
  if (den.nvars() != n) throw InputError("denominator nvars differs from n");
  try {
    return make_rational_map(std::move(comps), std::move(den), l);
  } catch (const std::logic_error& e) {
    throw InputError(e.what());
  }
}

HermitianForm form_from_json(const Json& j) {
  const std::size_t n = size_field(j, "nvars");
  HermitianForm::EntryMap entries;
  for (const auto& e : require(j, "entries")) {
    std::vector<int> a = require(e, "alpha").get<std::vector<int>>();
    std::vector<int> b = require(e, "beta").get<std::vector<int>>();
    if (a.size() != n || b.size() != n) throw InputError("entry index length differs from nvars");
    const Complex c{e.value("re", 0.0), e.value("im", 0.0)};
    entries[{MultiIndex(a), MultiIndex(b)}] += c;
    if (a != b) entries[{MultiIndex(b), MultiIndex(a)}] += std::conj(c);
  }
  return HermitianForm::from_entries(n, std::move(entries));
}

Matrix matrix_from_json(const Json& j) {
  if (!j.is_array() || j.empty() || !j[0].is_array()) throw InputError("expected a matrix as an array of rows");
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = static_cast<Eigen::Index>(j[0].size());
  Matrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j[static_cast<std::size_t>(r)];
    if (!row.is_array() || static_cast<Eigen::Index>(row.size()) != cols) throw InputError("matrix rows have different lengths");
    for (Eigen::Index c = 0; c < cols; ++c) m(r, c) = complex_from_json(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

Vector vector_from_json(const Json& j) {
  if (!j.is_array()) throw InputError("expected an array");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return v;
}

Permutation permutation_from_json(const Json& j, std::size_t n) {
  if (!j.is_array() || j.size() != n) throw InputError("permutation has the wrong length");
  Permutation p;
  std::vector<bool> seen(n, false);
  for (const auto& x : j) {
    if (!x.is_number_integer()) throw InputError("permutation entries must be integers");
    const int v = x.get<int>() - 1;
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[static_cast<std::size_t>(v)]) {
      throw InputError("not a permutation of 1..n");
    }
    seen[static_cast<std::size_t>(v)] = true;
    p.push_back(v);
  }
  return p;
}

BallAutomorphism automorphism_from_json(const Json& j, std::size_t n) {
  if (!j.is_object()) throw InputError("automorphism must be an object");
  const auto d = static_cast<Eigen::Index>(n);
  Matrix u = Matrix::Identity(d, d);
  if (j.contains("u")) {
    u = matrix_from_json(j.at("u"));
  } else if (j.contains("permutation")) {
    u = permutation_matrix(permutation_from_json(j.at("permutation"), n));
  } else if (j.contains("angles")) {
    const auto angles = j.at("angles").get<std::vector<double>>();
    if (angles.size() != n) throw InputError("angle list has the wrong length");
    u = Matrix::Zero(d, d);
    for (Eigen::Index i = 0; i < d; ++i) u(i, i) = std::polar(1.0, angles[static_cast<std::size_t>(i)]);
  }
  const Vector a = j.contains("a") ? vector_from_json(j.at("a")) : Vector::Zero(d);
  if (u.rows() != d || u.cols() != d || a.size() != d) throw InputError("automorphism dimension differs from the map");
  try {
    return BallAutomorphism(u, a);
  } catch (const std::logic_error& e) {
    throw InputError(e.what());
  }
}

Json read_json_file(const std::string& path) {
  std::string text;
  if (path == "-") {
    text.assign(std::istreambuf_iterator<char>(std::cin), {});
  } else {
    std::ifstream in(path);
    if (!in) throw InputError("cannot open " + path);
    text.assign(std::istreambuf_iterator<char>(in), {});
  }
  try {
    return Json::parse(text);
  } catch (const Json::exception& e) {
    throw InputError(std::string("malformed JSON: ") + e.what());
  }
}

}  // namespace ballmaps

#pragma once

#include <fstream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "stc/curvtensor.hpp"
#include "stc/linalg.hpp"
#include "stc/polynomial.hpp"
#include "stc/symtensor.hpp"

namespace stc {

using Json = nlohmann::ordered_json;

// Scalar values: exact types travel as "p/q" strings, doubles as numbers.
inline Json value_json(double v) { return v; }
inline Json value_json(const Rat& v) { return rational_to_string(v); }

template <class T>
T value_from_json(const Json& j);

template <>
inline double value_from_json<double>(const Json& j) {
  if (j.is_string()) return to_double(parse_rational(j.get<std::string>()));
  return j.get<double>();
}

template <>
inline Rat value_from_json<Rat>(const Json& j) {
  if (j.is_string()) return parse_rational(j.get<std::string>());
  if (j.is_number_integer()) return Rat(j.get<long long>());
  throw std::invalid_argument("exact mode needs integer or \"p/q\" values");
}

// --- SymTensor: {"dim","rank","components":[{"index":[1-based sorted],"value"}]}

template <class T>
Json tensor_json(const SymTensor<T>& t) {
  Json j;
  j["dim"] = t.n;
  j["rank"] = t.k;
  Json comps = Json::array();
  for (int pi = 0; pi < t.size(); ++pi) {
    if (is_zero(t.c[pi])) continue;
    Json e;
    Json idx = Json::array();
    for (int s : t.tab->idx[pi]) idx.push_back(s + 1);
    e["index"] = idx;
    e["value"] = value_json(t.c[pi]);
    comps.push_back(e);
  }
  j["components"] = comps;
  return j;
}

template <class T>
SymTensor<T> tensor_from_json(const Json& j) {
  int n = j.at("dim").get<int>(), k = j.at("rank").get<int>();
  if (n < 1 || k < 0) throw std::invalid_argument("bad tensor shape");
  SymTensor<T> t(n, k);
  for (const auto& e : j.at("components")) {
    MIdx idx;
    for (const auto& v : e.at("index")) {
      int i = v.get<int>();
      if (i < 1 || i > n) throw std::invalid_argument("tensor index out of range");
      idx.push_back(i - 1);
    }
    if (int(idx.size()) != k) throw std::invalid_argument("tensor index arity mismatch");
    t.set(idx, value_from_json<T>(e.at("value")));
  }
  return t;
}

// --- Metric: {"dim","matrix":[[row]...]}

template <class T>
Json metric_json(const Metric<T>& m) {
  Json j;
  j["dim"] = m.dim();
  Json rows = Json::array();
  for (int i = 0; i < m.dim(); ++i) {
    Json row = Json::array();
    for (int jj = 0; jj < m.dim(); ++jj) row.push_back(value_json(m.g(i, jj)));
    rows.push_back(row);
  }
  j["matrix"] = rows;
  return j;
}

template <class T>
Metric<T> metric_from_json(const Json& j) {
  int n = j.at("dim").get<int>();
  Mat<T> g(n);
  const auto& rows = j.at("matrix");
  if (int(rows.size()) != n) throw std::invalid_argument("metric row count mismatch");
  for (int i = 0; i < n; ++i) {
    if (int(rows[i].size()) != n) throw std::invalid_argument("metric column count mismatch");
    for (int jj = 0; jj < n; ++jj) g(i, jj) = value_from_json<T>(rows[i][jj]);
  }
  return Metric<T>(g);
}

// --- CurvTensor: representative quadruples i<j, k<l, (ij) <= (kl), 1-based.

template <class T>
Json curv_json(const CurvTensor<T>& Y) {
  Json j;
  j["dim"] = Y.n;
  j["rank"] = 4;
  Json comps = Json::array();
  for (int p = 0; p < Y.P; ++p) {
    auto [i, jj] = pair_unindex(Y.n, p);
    for (int q = p; q < Y.P; ++q) {
      if (is_zero(Y.pm(p, q))) continue;
      auto [k, l] = pair_unindex(Y.n, q);
      Json e;
      e["index"] = Json::array({i + 1, jj + 1, k + 1, l + 1});
      e["value"] = value_json(Y.pm(p, q));
      comps.push_back(e);
    }
  }
  j["components"] = comps;
  return j;
}

template <class T>
CurvTensor<T> curv_from_json(const Json& j) {
  int n = j.at("dim").get<int>();
  CurvTensor<T> Y(n);
  for (const auto& e : j.at("components")) {
    const auto& idx = e.at("index");
    if (idx.size() != 4) throw std::invalid_argument("curvature index arity mismatch");
    int i = idx[0].get<int>() - 1, jj = idx[1].get<int>() - 1;
    int k = idx[2].get<int>() - 1, l = idx[3].get<int>() - 1;
    if (i < 0 || jj >= n || k < 0 || l >= n || i >= jj || k >= l)
      throw std::invalid_argument("curvature index not a representative quadruple");
    int p = pair_index(n, i, jj), q = pair_index(n, k, l);
    T v = value_from_json<T>(e.at("value"));
    Y.pm(p, q) = v;
    Y.pm(q, p) = v;
  }
  return Y;
}

// --- Polynomial: {"dim","terms":[{"exp":[e1..en],"coeff":"p/q"}]}

template <class T>
Json poly_json(const Polynomial<T>& p) {
  Json j;
  j["dim"] = p.n;
  Json terms = Json::array();
  for (const auto& [e, v] : p.terms) {
    Json t;
    t["exp"] = e;
    t["coeff"] = value_json(v);
    terms.push_back(t);
  }
  j["terms"] = terms;
  return j;
}

template <class T>
Polynomial<T> poly_from_json(const Json& j) {
  Polynomial<T> p(j.at("dim").get<int>());
  for (const auto& t : j.at("terms")) {
    std::vector<int> e = t.at("exp").get<std::vector<int>>();
    if (int(e.size()) != p.n) throw std::invalid_argument("exponent arity mismatch");
    for (int x : e)
      if (x < 0) throw std::invalid_argument("negative exponent");
    p.add_term(std::move(e), value_from_json<T>(t.at("coeff")));
  }
  return p;
}

// --- Solution candidate bundle ---------------------------------------------

template <class T>
struct CoupledTensor {
  T coef = scalar_traits<T>::zero();  // a_k (side 'a') or b_k (side 'b')
  char side = 'a';
  std::string cls;  // declared kernel class: "codazzi", "killing", or empty
  SymTensor<T> om;
};

template <class T>
struct Candidate {
  std::string kind;  // flat-algebraic | chart | lie-group | hypersurface
  int dim = 0;
  std::string chart;      // chart fixture key (chart kind)
  std::string immersion;  // immersion fixture key (hypersurface kind)
  Metric<T> metric;       // explicit metric (flat-algebraic / lie-group)
  std::vector<CoupledTensor<T>> tensors;
  bool has_c = false, has_kappa = false;
  T c = scalar_traits<T>::zero();
  T kappa = scalar_traits<T>::zero();
};

template <class T>
Candidate<T> candidate_from_json(const Json& j) {
  Candidate<T> cand;
  cand.kind = j.at("kind").get<std::string>();
  cand.dim = j.at("dim").get<int>();
  if (cand.dim < 1) throw std::invalid_argument("bad candidate dimension");
  if (j.contains("chart")) cand.chart = j.at("chart").get<std::string>();
  if (j.contains("immersion")) cand.immersion = j.at("immersion").get<std::string>();
  cand.metric = j.contains("metric") ? metric_from_json<T>(j.at("metric"))
                                     : Metric<T>::standard(cand.dim);
  if (j.contains("tensors"))
    for (const auto& e : j.at("tensors")) {
      CoupledTensor<T> ct;
      ct.coef = e.contains("coef") ? value_from_json<T>(e.at("coef"))
                                   : scalar_traits<T>::from_long(1);
      if (e.contains("side")) {
        std::string s = e.at("side").get<std::string>();
        if (s != "a" && s != "b") throw std::invalid_argument("tensor side must be a or b");
        ct.side = s[0];
      }
      if (e.contains("class")) ct.cls = e.at("class").get<std::string>();
      ct.om = tensor_from_json<T>(e.at("tensor"));
      if (ct.om.n != cand.dim) throw std::invalid_argument("tensor dimension mismatch");
      cand.tensors.push_back(std::move(ct));
    }
  if (j.contains("c")) {
    cand.has_c = true;
    cand.c = value_from_json<T>(j.at("c"));
  }
  if (j.contains("kappa")) {
    cand.has_kappa = true;
    cand.kappa = value_from_json<T>(j.at("kappa"));
  }
  return cand;
}

inline Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::invalid_argument("cannot open " + path);
  Json j;
  in >> j;
  return j;
}

inline void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw std::invalid_argument("cannot open " + path + " for writing");
  out << text;
}

}  // namespace stc

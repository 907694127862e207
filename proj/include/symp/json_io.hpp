#pragma once

// JSON (de)serialization of forms, grids, targets, and regions, plus the
// deterministic CSV writer used by the CLI.

#include <cstdio>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "symp/density.hpp"
#include "symp/errors.hpp"
#include "symp/forms.hpp"
#include "symp/randlat.hpp"

namespace symp {

using nlohmann::json;

/// Parses "p/q" or "p"; plain JSON numbers pass through as inexact.
inline ExactScalar parse_exact_scalar(const json& j, bool exact_default) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    auto slash = s.find('/');
    try {
      if (slash == std::string::npos) return ExactScalar::rational(Rat(Int(s)));
      Int num(s.substr(0, slash));
      Int den(s.substr(slash + 1));
      if (den == 0) throw Error("form: zero denominator");
      return ExactScalar::rational(Rat(num, den));
    } catch (const std::exception&) {
      throw Error("form: bad rational entry '" + s + "'");
    }
  }
  if (j.is_number()) {
    double v = j.get<double>();
    if (exact_default && v == std::floor(v) && std::abs(v) < 1e15)
      return ExactScalar::rational(Rat(Int(std::int64_t(v))));
    return ExactScalar::inexact(v);
  }
  throw Error("form: entry must be a number or 'p/q' string");
}

struct LoadedForm {
  SymplecticForm form;
  std::optional<ExactGram> exact_gram;
};

/// {"n": int, "g": [[...]]}  or  {"n": int, "gram": [[...]], "exact": bool}
/// with rational entries as "p/q" strings.
inline LoadedForm form_from_json(const json& j) {
  if (!j.contains("n")) throw Error("form: missing field 'n'");
  int n = j.at("n").get<int>();
  if (n < 1) throw Error("form: field 'n' must be >= 1");
  const int d = 2 * n;
  auto read_matrix = [&](const json& rows, bool exact_default)
      -> std::vector<std::vector<ExactScalar>> {
    if (!rows.is_array() || int(rows.size()) != d)
      throw Error("form: matrix must have 2n rows");
    std::vector<std::vector<ExactScalar>> m(d);
    for (int i = 0; i < d; ++i) {
      if (!rows[i].is_array() || int(rows[i].size()) != d)
        throw Error("form: matrix row has wrong length");
      for (int jj = 0; jj < d; ++jj)
        m[i].push_back(parse_exact_scalar(rows[i][jj], exact_default));
    }
    return m;
  };

  if (j.contains("g")) {
    auto entries = read_matrix(j.at("g"), false);
    MatrixXd g(d, d);
    for (int i = 0; i < d; ++i)
      for (int jj = 0; jj < d; ++jj) g(i, jj) = entries[i][jj].approx;
    return LoadedForm{SymplecticForm::from_g(g, n), std::nullopt};
  }
  if (j.contains("gram")) {
    bool exact = j.value("exact", false);
    auto entries = read_matrix(j.at("gram"), exact);
    MatrixXd m(d, d);
    for (int i = 0; i < d; ++i)
      for (int jj = 0; jj < d; ++jj) m(i, jj) = entries[i][jj].approx;
    ExactGram eg(n, entries);
    // fully exact input is validated exactly, no tolerance
    if (eg.all_exact() && !eg.unimodular_exact())
      throw DeterminantError("form: exact gram is not unimodular");
    return LoadedForm{SymplecticForm::from_gram(m, n), std::move(eg)};
  }
  throw Error("form: need field 'g' or 'gram'");
}

inline LoadedForm load_form_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("form: cannot open " + path);
  json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    throw Error("form: bad JSON in " + path + ": " + e.what());
  }
  return form_from_json(j);
}

inline json form_to_json(const SymplecticForm& form) {
  json j;
  j["n"] = form.n();
  if (form.has_g()) {
    json rows = json::array();
    for (int i = 0; i < form.dim(); ++i) {
      json row = json::array();
      for (int c = 0; c < form.dim(); ++c) row.push_back(form.g()(i, c));
      rows.push_back(row);
    }
    j["g"] = rows;
  } else {
    json rows = json::array();
    for (int i = 0; i < form.dim(); ++i) {
      json row = json::array();
      for (int c = 0; c < form.dim(); ++c) row.push_back(form.gram()(i, c));
      rows.push_back(row);
    }
    j["gram"] = rows;
    j["exact"] = false;
  }
  return j;
}

/// Targets {"(i,j)": value, ...} (also accepts "i,j" keys).
inline TargetMatrix targets_from_json(const json& j, int k, double eps) {
  std::vector<double> xi(std::size_t(k) * (k - 1) / 2, 0.0);
  std::vector<bool> seen(xi.size(), false);
  TargetMatrix probe = TargetMatrix::uniform(k, 0.0, 1.0);
  for (auto it = j.begin(); it != j.end(); ++it) {
    std::string key = it.key();
    std::string digits;
    for (char c : key) digits += (c == '(' || c == ')' ? ' ' : c);
    int i = 0, jj = 0;
    if (std::sscanf(digits.c_str(), " %d , %d", &i, &jj) != 2)
      throw Error("targets: bad key '" + key + "'");
    int idx = probe.pair_index(i, jj);
    xi[idx] = it.value().get<double>();
    seen[idx] = true;
  }
  for (bool s : seen)
    if (!s) throw Error("targets: missing pair");
  return TargetMatrix(k, std::move(xi), eps);
}

/// Region for the sample subcommand:
/// {"shells": [[lo, hi], ...], "form": {...}?, "interval_all": [a, b]?}
inline RegionSpec region_from_json(const json& j) {
  RegionSpec r;
  if (!j.contains("shells")) throw Error("region: missing 'shells'");
  for (const auto& s : j.at("shells")) {
    if (!s.is_array() || s.size() != 2) throw Error("region: bad shell");
    r.shells.emplace_back(s[0].get<double>(), s[1].get<double>());
  }
  if (j.contains("form")) {
    r.form = form_from_json(j.at("form")).form;
    if (!j.contains("interval_all"))
      throw Error("region: form given without 'interval_all'");
    auto iv = j.at("interval_all");
    r.grid = IntervalGrid::uniform(r.k(), iv[0].get<double>(),
                                   iv[1].get<double>());
  }
  return r;
}

/// Fixed-format float printing so identical runs emit identical bytes.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

/// CSV with a '#'-prefixed JSON header line carrying the run config.
class CsvWriter {
 public:
  CsvWriter(const std::string& path, const json& header,
            const std::vector<std::string>& columns) {
    if (path == "-")
      out_ = nullptr;
    else {
      file_.open(path);
      if (!file_) throw Error("csv: cannot open " + path);
      out_ = &file_;
    }
    line("# " + header.dump());
    std::string h;
    for (std::size_t i = 0; i < columns.size(); ++i) {
      if (i) h += ",";
      h += columns[i];
    }
    line(h);
  }

  void row(const std::vector<std::string>& cells) {
    std::string l;
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) l += ",";
      l += cells[i];
    }
    line(l);
  }

 private:
  void line(const std::string& l) {
    if (out_)
      (*out_) << l << "\n";
    else
      std::printf("%s\n", l.c_str());
  }
  std::ofstream file_;
  std::ofstream* out_ = nullptr;
};

}  // namespace symp

#include "cmvflows/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cmvflows/errors.hpp"

namespace cmvflows {

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void JsonWriter::separator() {
  if (pending_key_) {
    pending_key_ = false;
    return;
  }
  if (!first_in_scope_.empty()) {
    if (!first_in_scope_.back()) out_ += ",";
    first_in_scope_.back() = false;
  }
}

JsonWriter& JsonWriter::begin_object() {
  separator();
  out_ += "{";
  first_in_scope_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_object() {
  out_ += "}";
  first_in_scope_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::begin_array() {
  separator();
  out_ += "[";
  first_in_scope_.push_back(true);
  return *this;
}

JsonWriter& JsonWriter::end_array() {
  out_ += "]";
  first_in_scope_.pop_back();
  return *this;
}

JsonWriter& JsonWriter::key(const std::string& k) {
  separator();
  out_ += "\"" + k + "\":";
  pending_key_ = true;
  return *this;
}

JsonWriter& JsonWriter::value(double v) {
  separator();
  out_ += format_double(v);
  return *this;
}

JsonWriter& JsonWriter::value(int v) {
  separator();
  out_ += std::to_string(v);
  return *this;
}

JsonWriter& JsonWriter::value(bool v) {
  separator();
  out_ += v ? "true" : "false";
  return *this;
}

JsonWriter& JsonWriter::value(const std::string& v) {
  separator();
  std::string esc;
  for (char c : v) {
    if (c == '"' || c == '\\') esc += '\\';
    esc += c;
  }
  out_ += "\"" + esc + "\"";
  return *this;
}

JsonWriter& JsonWriter::value(const cxd& v) {
  begin_array();
  value(v.real());
  value(v.imag());
  end_array();
  return *this;
}

JsonWriter& JsonWriter::raw(const std::string& r) {
  separator();
  out_ += r;
  return *this;
}

// ---------------------------------------------------------------------------

std::string to_json(const VerblunskyVector& v) {
  JsonWriter w;
  w.begin_object().key("p").value(v.p()).key("alpha").begin_array();
  for (const auto& a : v.alpha()) w.value(a);
  w.end_array().end_object();
  return w.str();
}

VerblunskyVector verblunsky_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int p = j.at("p").get<int>();
  std::vector<cxd> alpha;
  for (const auto& e : j.at("alpha")) alpha.emplace_back(e.at(0).get<double>(), e.at(1).get<double>());
  return VerblunskyVector(p, alpha);
}

std::string to_json(const LaurentMatrix& l) {
  JsonWriter w;
  w.begin_object().key("p").value(l.size()).key("coeffs").begin_object();
  for (const auto& [power, m] : l.coeffs()) {
    w.key(std::to_string(power)).begin_array();
    for (int i = 0; i < l.size(); ++i) {
      w.begin_array();
      for (int jj = 0; jj < l.size(); ++jj) w.value(m(i, jj));
      w.end_array();
    }
    w.end_array();
  }
  w.end_object().end_object();
  return w.str();
}

LaurentMatrix laurent_from_json(const std::string& text) {
  auto j = nlohmann::json::parse(text);
  int p = j.at("p").get<int>();
  LaurentMatrix l(p);
  for (const auto& [k, rows] : j.at("coeffs").items()) {
    Eigen::MatrixXcd m(p, p);
    for (int i = 0; i < p; ++i)
      for (int c = 0; c < p; ++c)
        m(i, c) = cxd(rows.at(i).at(c).at(0).get<double>(), rows.at(i).at(c).at(1).get<double>());
    l.set_coeff(std::stoi(k), m);
  }
  return l;
}

std::string to_json(const ConservedSet& c) {
  JsonWriter w;
  w.begin_object().key("P").value(c.P).key("I").begin_array();
  for (const auto& v : c.I) w.value(v);
  w.end_array().key("K").begin_array();
  for (const auto& v : c.K) w.value(v);
  w.end_array().end_object();
  return w.str();
}

std::string to_json(const SpectralCurveData& d) {
  JsonWriter w;
  w.begin_object().key("branch").begin_array();
  for (const auto& v : d.branch) w.value(v);
  w.end_array().key("dirichlet").begin_array();
  for (const auto& v : d.dirichlet_z) w.value(v);
  w.end_array().key("divisor").begin_array();
  for (const auto& [h, z] : d.divisor) {
    w.begin_array().value(h).value(z).end_array();
  }
  w.end_array().key("genus").value(d.genus).key("generic").value(d.generic).end_object();
  return w.str();
}

std::string to_json(const InvolutionReport& r) {
  JsonWriter w;
  w.begin_object().key("pairs").begin_array();
  for (const auto& pr : r.pairs) {
    w.begin_object().key("a").value(pr.a).key("b").value(pr.b).key("abs").value(pr.abs_bracket);
    w.end_object();
  }
  w.end_array()
      .key("max_abs").value(r.max_abs)
      .key("tol").value(r.tol)
      .key("pass").value(r.pass)
      .end_object();
  return w.str();
}

std::string trajectory_csv(const Trajectory& t) {
  std::ostringstream out;
  int p = t.states.empty() ? 0 : t.states.front().p();
  out << "t";
  for (int j = 0; j < p; ++j) out << ", re_a" << j << ", im_a" << j;
  out << ", P_drift, maxI_drift\n";
  for (std::size_t i = 0; i < t.times.size(); ++i) {
    out << format_double(t.times[i]);
    for (const auto& a : t.states[i].alpha())
      out << ", " << format_double(a.real()) << ", " << format_double(a.imag());
    out << ", " << format_double(t.drift[i].dP) << ", " << format_double(t.drift[i].max_dI) << "\n";
  }
  return out.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw NumericalError("write_file", "cannot open " + path);
  f << content;
}

std::string read_file(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw NumericalError("read_file", "cannot open " + path);
  std::ostringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace cmvflows

#pragma once

#include <string>
#include <vector>

#include "cmvflows/conserved.hpp"
#include "cmvflows/curve.hpp"
#include "cmvflows/flows.hpp"
#include "cmvflows/laurent.hpp"
#include "cmvflows/poisson.hpp"

namespace cmvflows {

// Ordered JSON emitter with %.17g formatting so identical inputs produce
// bitwise-identical files.
class JsonWriter {
 public:
  std::string str() const { return out_; }

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(const std::string& k);
  JsonWriter& value(double v);
  JsonWriter& value(int v);
  JsonWriter& value(bool v);
  JsonWriter& value(const std::string& v);
  JsonWriter& value(const cxd& v);  // [re, im]
  JsonWriter& raw(const std::string& r);

 private:
  void separator();
  std::string out_;
  std::vector<bool> first_in_scope_;
  bool pending_key_ = false;
};

std::string format_double(double v);  // %.17g

// documented schemas
std::string to_json(const VerblunskyVector& v);
VerblunskyVector verblunsky_from_json(const std::string& text);

std::string to_json(const LaurentMatrix& l);
LaurentMatrix laurent_from_json(const std::string& text);

std::string to_json(const ConservedSet& c);
std::string to_json(const SpectralCurveData& d);
std::string to_json(const InvolutionReport& r);

// Trajectory CSV: t, re_a0, im_a0, ..., re_a{p-1}, im_a{p-1}, P_drift, maxI_drift
std::string trajectory_csv(const Trajectory& t);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace cmvflows

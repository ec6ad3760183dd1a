#include "su2kam/trace_io.hpp"

#include <cstdio>
#include <fstream>

#include "su2kam/errors.hpp"

namespace kam {

std::string format_number(double x) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

ordered_json freq_json(const std::optional<Freq>& k) {
  if (!k) return nullptr;
  if (k->dim() == 1) return (*k)[0];
  ordered_json arr = ordered_json::array();
  for (int a = 0; a < k->dim(); ++a) arr.push_back((*k)[a]);
  return arr;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ConfigError("cannot write '" + path.string() + "'");
  return out;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
  return q + "\"";
}

template <class Real>
double d(Real x) {
  return static_cast<double>(x);
}

}  // namespace

template <class Real>
ordered_json step_record(int step, const StepReport<Real>& rep) {
  ordered_json j;
  j["step"] = step;
  j["N"] = rep.N;
  j["K"] = d(rep.K);
  j["k_r"] = freq_json(rep.k_r);
  j["eps0"] = d(rep.eps0_after);
  j["eps_s0"] = d(rep.eps_s0_after);
  j["normG0"] = d(rep.normG0);
  j["normGs0"] = d(rep.normGs0);
  j["angle"] = d(rep.angle_after);
  j["warnings"] = rep.warnings;
  return j;
}

template <class Real>
void write_trace_jsonl(const std::filesystem::path& path, const SchemeTrace<Real>& trace) {
  auto out = open_out(path);
  for (std::size_t i = 0; i < trace.steps.size(); ++i) out << step_record(static_cast<int>(i) + 1, trace.steps[i]).dump() << '\n';
}

template <class Real>
void write_trace_csv(const std::filesystem::path& path, const SchemeTrace<Real>& trace) {
  auto out = open_out(path);
  out << "step,N,K,k_r,eps0,eps_s0,normG0,normGs0,angle,warnings\n";
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    std::string warnings;
    for (const auto& w : s.warnings) warnings += (warnings.empty() ? "" : "; ") + w;
    out << i + 1 << ',' << s.N << ',' << format_number(d(s.K)) << ',' << csv_field(s.k_r ? s.k_r->to_string() : "")
        << ',' << format_number(d(s.eps0_after)) << ',' << format_number(d(s.eps_s0_after)) << ','
        << format_number(d(s.normG0)) << ',' << format_number(d(s.normGs0)) << ',' << format_number(d(s.angle_after))
        << ',' << csv_field(warnings) << '\n';
  }
}

template <class Real>
ordered_json trace_summary(const SchemeTrace<Real>& trace) {
  ordered_json j;
  j["status"] = to_string(trace.status);
  j["message"] = trace.message;
  j["steps"] = trace.steps.size();
  j["resonant_steps"] = trace.resonant_steps;
  j["eps0_initial"] = d(trace.eps0_initial);
  j["eps_s0_initial"] = d(trace.eps_s0_initial);
  j["eps0_final"] = trace.steps.empty() ? d(trace.eps0_initial) : d(trace.steps.back().eps0_after);
  j["lambda"] = d(trace.lambda);
  j["warnings"] = trace.warnings;
  ordered_json diag = ordered_json::array();
  for (std::size_t i = 0; i < trace.steps.size(); ++i) {
    const auto& s = trace.steps[i];
    ordered_json r;
    r["step"] = i + 1;
    r["resonance_distance"] = d(s.resonance_distance);
    r["has_B"] = s.has_B;
    r["has_C"] = s.has_C;
    r["eps0_before"] = d(s.eps0_before);
    r["eps_s0_before"] = d(s.eps_s0_before);
    r["normY0"] = d(s.normY0);
    r["gate"] = d(s.gate);
    r["c10_fit"] = d(s.c10_fit);
    r["c20_fit"] = d(s.c20_fit);
    r["ratio_t"] = d(s.ratio_t);
    r["ratio_z"] = d(s.ratio_z);
    r["min_divisor"] = d(s.min_divisor);
    r["identity_residual"] = d(s.identity_residual);
    r["aliasing"] = d(s.aliasing);
    r["tail"] = d(s.tail);
    r["band"] = s.band_after;
    if (i < trace.gap_g1.size()) {
      r["gap_g1"] = d(trace.gap_g1[i]);
      r["gap_g2"] = d(trace.gap_g2[i]);
      r["conjugacy_defect"] = d(trace.conjugacy_defect[i]);
    }
    diag.push_back(std::move(r));
  }
  j["diagnostics"] = std::move(diag);
  return j;
}

void write_json(const std::filesystem::path& path, const ordered_json& doc) {
  auto out = open_out(path);
  out << doc.dump(2) << '\n';
}

std::vector<ordered_json> read_trace_jsonl(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open trace '" + path.string() + "'");
  std::vector<ordered_json> out;
  std::string line;
  int n = 0;
  while (std::getline(in, line)) {
    ++n;
    if (line.empty()) continue;
    try {
      out.push_back(ordered_json::parse(line));
    } catch (const nlohmann::json::exception& e) {
      throw ConfigError("trace line " + std::to_string(n) + ": " + e.what());
    }
    if (!out.back().is_object()) throw ConfigError("trace line " + std::to_string(n) + " is not an object");
  }
  return out;
}

#define KAM_INSTANTIATE_TRACE_IO(R)                                                        \
  template ordered_json step_record(int, const StepReport<R>&);                            \
  template void write_trace_jsonl(const std::filesystem::path&, const SchemeTrace<R>&);    \
  template void write_trace_csv(const std::filesystem::path&, const SchemeTrace<R>&);      \
  template ordered_json trace_summary(const SchemeTrace<R>&);

KAM_INSTANTIATE_TRACE_IO(double)
KAM_INSTANTIATE_TRACE_IO(long double)

}  // namespace kam

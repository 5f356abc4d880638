#include "dioph/certificate.hpp"

#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>

namespace dioph {

namespace fs = std::filesystem;

namespace {

std::string join_lambdas(const std::vector<double>& v) {
  std::string s;
  for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + format_lambda(v[i]);
  return s;
}

std::vector<double> split_lambdas(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string t;
  while (std::getline(ss, t, ','))
    if (!t.empty()) out.push_back(parse_lambda(t));
  return out;
}

std::size_t to_size(const std::string& s) {
  try {
    std::size_t pos = 0;
    unsigned long long v = std::stoull(s, &pos);
    if (pos != s.size()) throw FormatError("bad integer '" + s + "'");
    return v;
  } catch (const std::logic_error&) {
    throw FormatError("bad integer '" + s + "'");
  }
}

}  // namespace

void write_certificate(std::ostream& out, const Decomposition& d,
                       const std::vector<std::string>& target_files,
                       const std::vector<std::string>& component_files) {
  out << "dioph-certificate 1\n"
      << "mode=" << to_string(d.mode) << '\n'
      << "base=" << d.base << '\n'
      << "components=" << d.components.size() << '\n'
      << "lambdas=" << join_lambdas(d.lambdas) << '\n'
      << "mus=" << join_lambdas(d.mus) << '\n'
      << "budget=" << d.budget << '\n'
      << "jitter=" << d.jitter << '\n'
      << "epsilon=" << format_lambda(d.epsilon) << '\n';
  out << "digits=";
  for (std::size_t i = 0; i < d.digit_set.size(); ++i) out << (i ? "," : "") << d.digit_set[i];
  out << '\n';
  write_schedule(out, d.schedule);
  for (const auto& c : d.corrections) out << "correction " << c.j << ' ' << c.a << '\n';
  for (const auto& c : d.designed)
    out << "designed " << c.component << ' ' << c.j << ' ' << c.cut << ' ' << c.block_end << '\n';
  for (const auto& r : d.repairs) out << "repair " << r.j << ' ' << r.pos << '\n';
  for (const auto& [k, v] : d.attestations) out << "attest " << k << '=' << v << '\n';
  for (const auto& w : d.warnings) out << "warning " << w << '\n';
  for (std::size_t i = 0; i < target_files.size(); ++i) out << "target " << i << ' ' << target_files[i] << '\n';
  for (std::size_t i = 0; i < component_files.size(); ++i)
    out << "component " << i << ' ' << component_files[i] << '\n';
  out << "end-certificate\n";
}

void write_decomposition(const std::string& dir, const Decomposition& d) {
  fs::create_directories(dir);
  std::vector<std::string> tf, cf;
  for (std::size_t i = 0; i < d.targets.size(); ++i) {
    tf.push_back("xi" + std::to_string(i + 1) + ".dig");
    write_digit_file((fs::path(dir) / tf.back()).string(), d.targets[i]);
  }
  for (std::size_t i = 0; i < d.components.size(); ++i) {
    cf.push_back("x" + std::to_string(i) + ".dig");
    write_digit_file((fs::path(dir) / cf.back()).string(), d.components[i]);
  }
  std::ofstream out(fs::path(dir) / "cert.txt", std::ios::binary);
  if (!out) throw FormatError("cannot write certificate in " + dir);
  write_certificate(out, d, tf, cf);
}

Decomposition read_decomposition(const std::string& cert_path) {
  std::ifstream in(cert_path, std::ios::binary);
  if (!in) throw FormatError("cannot open certificate " + cert_path);
  const fs::path dir = fs::path(cert_path).parent_path();
  std::string line;
  if (!std::getline(in, line) || line != "dioph-certificate 1")
    throw FormatError("certificate: bad magic line");
  Decomposition d;
  std::size_t ncomp = 0;
  bool have_schedule = false, ended = false;
  std::vector<std::string> tf, cf;
  while (std::getline(in, line)) {
    if (line == "end-certificate") {
      ended = true;
      break;
    }
    if (line.rfind("schedule ", 0) == 0) {
      std::stringstream block;
      block << line << '\n';
      while (std::getline(in, line)) {
        block << line << '\n';
        if (line == "end-schedule") break;
      }
      d.schedule = read_schedule(block);
      have_schedule = true;
      continue;
    }
    std::istringstream ls(line);
    std::string key;
    ls >> key;
    auto eq = line.find('=');
    if (key == "correction") {
      Correction c;
      if (!(ls >> c.j >> c.a)) throw FormatError("certificate: bad correction line");
      d.corrections.push_back(c);
    } else if (key == "designed") {
      DesignedCut c;
      if (!(ls >> c.component >> c.j >> c.cut >> c.block_end))
        throw FormatError("certificate: bad designed line");
      d.designed.push_back(c);
    } else if (key == "repair") {
      Repair r;
      if (!(ls >> r.j >> r.pos)) throw FormatError("certificate: bad repair line");
      d.repairs.push_back(r);
    } else if (key == "attest") {
      auto e = line.find('=', 7);
      if (e == std::string::npos) throw FormatError("certificate: bad attest line");
      d.attestations.push_back({line.substr(7, e - 7), line.substr(e + 1)});
    } else if (key == "warning") {
      d.warnings.push_back(line.size() > 8 ? line.substr(8) : "");
    } else if (key == "target" || key == "component") {
      std::size_t i;
      std::string f;
      if (!(ls >> i >> f)) throw FormatError("certificate: bad file line");
      auto& v = key == "target" ? tf : cf;
      if (i != v.size()) throw FormatError("certificate: file lines out of order");
      v.push_back(f);
    } else if (eq != std::string::npos) {
      const std::string k = line.substr(0, eq), v = line.substr(eq + 1);
      if (k == "mode") d.mode = mode_from_string(v);
      else if (k == "base") d.base = unsigned(to_size(v));
      else if (k == "components") ncomp = to_size(v);
      else if (k == "lambdas") d.lambdas = split_lambdas(v);
      else if (k == "mus") d.mus = split_lambdas(v);
      else if (k == "budget") d.budget = to_size(v);
      else if (k == "jitter") d.jitter = to_size(v);
      else if (k == "epsilon") d.epsilon = parse_lambda(v);
      else if (k == "digits") {
        std::stringstream ss(v);
        std::string t;
        while (std::getline(ss, t, ','))
          if (!t.empty()) d.digit_set.push_back(unsigned(to_size(t)));
      } else throw FormatError("certificate: unknown key '" + k + "'");
    } else if (!line.empty()) {
      throw FormatError("certificate: unrecognized line '" + line + "'");
    }
  }
  if (!ended) throw FormatError("certificate: missing end-certificate");
  if (!have_schedule) throw FormatError("certificate: missing schedule");
  if (cf.size() != ncomp || ncomp < 2) throw FormatError("certificate: component count mismatch");
  for (const auto& f : tf) d.targets.push_back(read_digit_file((dir / f).string()));
  for (const auto& f : cf) d.components.push_back(read_digit_file((dir / f).string()));
  for (const auto& x : d.targets)
    if (x.base() != d.base) throw FormatError("certificate: target base mismatch");
  for (const auto& x : d.components)
    if (x.base() != d.base) throw FormatError("certificate: component base mismatch");
  return d;
}

std::string certificate_summary(const Decomposition& d) {
  std::ostringstream s;
  s << "mode=" << to_string(d.mode) << " base=" << d.base << " components=" << d.components.size()
    << " lambdas=" << join_lambdas(d.lambdas) << " budget=" << d.budget << '\n';
  s << "intervals=" << d.schedule.intervals.size() << " last_h=" << d.schedule.end()
    << " corrections=" << d.corrections.size() << " designed=" << d.designed.size()
    << " jitter=" << d.jitter << " repairs=" << d.repairs.size() << '\n';
  for (const auto& [k, v] : d.attestations) s << "attest " << k << '=' << v << '\n';
  for (const auto& w : d.warnings) s << "warning " << w << '\n';
  return s.str();
}

}  // namespace dioph

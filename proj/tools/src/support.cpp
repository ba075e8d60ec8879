#include <charconv>
#include <chrono>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <sstream>

#include "cli_internal.hpp"

namespace fatou::cli {

void Record::add(std::string key, double value) { add(std::move(key), fmt(value)); }

std::string Record::text() const {
  std::string s;
  for (const auto& [k, v] : lines_) s += k + "=" + v + "\n";
  return s;
}

std::string Record::hash() const {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : text()) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return std::string(buf, 12);
}

std::string fmt(double x) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

std::string fmt(Complex c) { return fmt(c.real()) + "," + fmt(c.imag()); }
std::string fmt(Point p) { return fmt(p.z) + "," + fmt(p.w); }

std::vector<double> parse_reals(const std::string& text) {
  std::vector<double> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t end = text.find(',', pos);
    if (end == std::string::npos) end = text.size();
    std::string item = text.substr(pos, end - pos);
    while (!item.empty() && item.front() == ' ') item.erase(item.begin());
    while (!item.empty() && item.back() == ' ') item.pop_back();
    if (!item.empty() && item.front() == '+') item.erase(item.begin());
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(item.data(), item.data() + item.size(), v);
    if (item.empty() || ec != std::errc{} || ptr != item.data() + item.size())
      throw Error(ErrorKind::Parse, "cannot read number '" + item + "' in '" + text + "'");
    out.push_back(v);
    pos = end + 1;
  }
  return out;
}

Complex parse_complex(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() == 1) return v[0];
  if (v.size() == 2) return {v[0], v[1]};
  throw Error(ErrorKind::Parse, "expected re,im but got '" + text + "'");
}

Point parse_point(const std::string& text) {
  const auto v = parse_reals(text);
  if (v.size() == 2) return {v[0], v[1]};
  if (v.size() == 4) return {{v[0], v[1]}, {v[2], v[3]}};
  throw Error(ErrorKind::Parse, "expected 2 or 4 numbers for a point but got '" + text + "'");
}

PlanarMap build_map(const MapOpts& o, Record& rec) {
  rec.add("family", o.family);
  if (o.family == "skew-siegel") {
    rec.add("theta", o.theta);
    return make_skew_siegel(o.theta);
  }
  if (o.family == "cusp") {
    rec.add("p", o.p);
    rec.add("q", o.q);
    rec.add("k", o.k);
    if (o.p == o.q) throw Error(ErrorKind::DegenerateFamily, "cusp family needs p != q");
    return make_cusp(o.p, o.q, o.k);
  }
  if (o.family == "tangent") {
    if (o.g.empty() || o.P.empty() || o.Q.empty()) throw Error(ErrorKind::Parse, "tangent family needs --g, --P and --Q");
    rec.add("g", o.g);
    rec.add("P", o.P);
    rec.add("Q", o.Q);
    rec.add("k", o.k);
    return make_tangent_identity(parse_poly(o.g), parse_poly(o.P), parse_poly(o.Q), o.k);
  }
  if (o.family == "generic") {
    if (o.pz.empty() || o.pw.empty()) throw Error(ErrorKind::Parse, "generic family needs --pz and --pw");
    rec.add("pz", o.pz);
    rec.add("pw", o.pw);
    return PlanarMap(parse_poly(o.pz), parse_poly(o.pw));
  }
  throw Error(ErrorKind::Parse, "unknown family '" + o.family + "'");
}

Point resolve_base(const MapOpts& o, const PlanarMap& map, Record& rec) {
  if (!o.seed_on_curve.empty()) {
    if (o.seed_on_curve.rfind("t=", 0) != 0) throw Error(ErrorKind::Parse, "--seed-on-curve expects t=<re>[,<im>]");
    if (!map.cusp()) throw Error(ErrorKind::Precondition, "--seed-on-curve needs the cusp family");
    const Complex t = parse_complex(o.seed_on_curve.substr(2));
    rec.add("seed_on_curve", fmt(t));
    return cusp_curve_point(map.cusp()->p, map.cusp()->q, t);
  }
  if (o.seed.empty()) throw Error(ErrorKind::Parse, "a point is required: --seed or --seed-on-curve");
  const Point p = parse_point(o.seed);
  rec.add("seed", fmt(p));
  return p;
}

BivarPoly default_target(const PlanarMap& map, const std::string& target, Record& rec) {
  BivarPoly t;
  if (!target.empty()) t = parse_poly(target);
  else if (map.tangent()) t = map.tangent()->g;
  else if (map.skew()) t = BivarPoly::w();
  else throw Error(ErrorKind::Parse, "generic maps need --target");
  rec.add("target", format_poly(t));
  return t;
}

std::ofstream open_output(const CommonOpts& o, const std::string& stem, const std::string& hash,
                          const std::string& ext, std::string* path) {
  std::filesystem::create_directories(o.out);
  const std::filesystem::path p = std::filesystem::path(o.out) / (stem + "_" + hash + "." + ext);
  std::ofstream os(p, std::ios::binary);
  if (!os) throw Error(ErrorKind::Parse, "cannot write " + p.string());
  if (path) *path = p.string();
  return os;
}

void write_run_record(const CommonOpts& o, const std::string& command, const Record& rec) {
  const std::string h = rec.hash();
  std::ofstream os = open_output(o, command, h, "run");
  os << "command=" << command << "\n" << rec.text() << "config_hash=" << h << "\n";
  if (!o.no_timestamp) {
    const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
    std::tm tm{};
    gmtime_r(&now, &tm);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
    os << "timestamp=" << buf << "\n";
  }
}

}  // namespace fatou::cli

// Copyright 2026 The capres Authors
// SPDX-License-Identifier: Apache-2.0

#include "capres/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <vector>
#include "capres/errors.hpp"
#include "capres/output.hpp"

namespace capres
{

namespace
{

struct Entry
{
  std::string key;
  std::string value;
  int line = 0;
  int column = 0;
  int key_column = 0;
};

struct Document
{
  std::vector<Entry> globals;
  std::vector<std::vector<Entry>> spheres;
  std::vector<int> sphere_lines;
};

[[noreturn]] void FailSemantic(const std::string &source, const std::string &msg)
{
  throw ConfigError(source + ": " + msg);
}

[[noreturn]] void Fail(const std::string &source, int line, int column, const std::string &msg)
{
  throw ConfigError(source + ":" + std::to_string(line) + ":" + std::to_string(column) + ": " +
                    msg);
}

bool IsSpace(char c) { return c == ' ' || c == '\t' || c == '\r'; }

bool IsKeyChar(char c)
{
  return (c >= 'a' && c <= 'z') || (c >= '0' && c <= '9') || c == '_';
}

Document Tokenize(const std::string &text, const std::string &source)
{
  Document doc;
  std::istringstream in(text);
  std::string raw;
  int line = 0;
  while (std::getline(in, raw))
  {
    line++;
    const std::string body = raw.substr(0, raw.find('#'));
    std::size_t b = 0;
    while (b < body.size() && IsSpace(body[b]))
    {
      b++;
    }
    std::size_t e = body.size();
    while (e > b && IsSpace(body[e - 1]))
    {
      e--;
    }
    if (b == e)
    {
      continue;
    }
    const int col = static_cast<int>(b) + 1;
    if (body[b] == '[')
    {
      if (body[e - 1] != ']')
      {
        Fail(source, line, static_cast<int>(e), "expected ']' to close the section header");
      }
      const std::string name = body.substr(b + 1, e - b - 2);
      if (name != "sphere")
      {
        Fail(source, line, col + 1, "unknown section '" + name + "'");
      }
      doc.spheres.emplace_back();
      doc.sphere_lines.push_back(line);
      continue;
    }
    std::size_t k = b;
    while (k < e && IsKeyChar(body[k]))
    {
      k++;
    }
    if (k == b)
    {
      Fail(source, line, col, "expected a key");
    }
    std::size_t eq = k;
    while (eq < e && IsSpace(body[eq]))
    {
      eq++;
    }
    if (eq >= e || body[eq] != '=')
    {
      Fail(source, line, static_cast<int>(eq) + 1, "expected '=' after key");
    }
    std::size_t v = eq + 1;
    while (v < e && IsSpace(body[v]))
    {
      v++;
    }
    if (v >= e)
    {
      Fail(source, line, static_cast<int>(eq) + 2, "missing value");
    }
    Entry entry{body.substr(b, k - b), body.substr(v, e - v), line, static_cast<int>(v) + 1, col};
    auto &scope = doc.spheres.empty() ? doc.globals : doc.spheres.back();
    for (const auto &prev : scope)
    {
      if (prev.key == entry.key)
      {
        Fail(source, line, col, "duplicate key '" + entry.key + "'");
      }
    }
    scope.push_back(std::move(entry));
  }
  return doc;
}

class Reader
{
public:
  explicit Reader(std::string source) : source_(std::move(source)) {}

  [[noreturn]] void Invalid(const Entry &e, const std::string &msg) const
  {
    Fail(source_, e.line, e.column, "invalid value for '" + e.key + "': " + msg);
  }

  double Real(const Entry &e) const { return ParseReal(e, e.value); }

  long long Integer(const Entry &e) const
  {
    long long v = 0;
    const char *first = e.value.data();
    const char *last = first + e.value.size();
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (ec != std::errc() || ptr != last)
    {
      Invalid(e, "expected an integer, got '" + e.value + "'");
    }
    return v;
  }

  bool Boolean(const Entry &e) const
  {
    if (e.value == "true")
    {
      return true;
    }
    if (e.value == "false")
    {
      return false;
    }
    Invalid(e, "expected true or false, got '" + e.value + "'");
  }

  std::vector<double> List(const Entry &e, std::size_t count) const
  {
    std::vector<double> out;
    std::size_t start = 0;
    while (true)
    {
      const std::size_t comma = e.value.find(',', start);
      std::string part = e.value.substr(start, comma == std::string::npos ? std::string::npos
                                                                           : comma - start);
      const auto b = part.find_first_not_of(" \t");
      const auto t = part.find_last_not_of(" \t");
      part = b == std::string::npos ? "" : part.substr(b, t - b + 1);
      out.push_back(ParseReal(e, part));
      if (comma == std::string::npos)
      {
        break;
      }
      start = comma + 1;
    }
    if (out.size() != count)
    {
      Invalid(e, "expected " + std::to_string(count) + " comma-separated numbers");
    }
    return out;
  }

  cplx Complex(const Entry &e) const
  {
    if (e.value.find(',') == std::string::npos)
    {
      return {Real(e), 0.0};
    }
    const auto v = List(e, 2);
    return {v[0], v[1]};
  }

private:
  double ParseReal(const Entry &e, const std::string &token) const
  {
    double v = 0.0;
    const char *first = token.data();
    const char *last = first + token.size();
    if (first != last && *first == '+')
    {
      first++;
    }
    auto [ptr, ec] = std::from_chars(first, last, v);
    if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(v))
    {
      Invalid(e, "expected a finite number, got '" + token + "'");
    }
    return v;
  }

  std::string source_;
};

// Invalid value for a field that may have been left at its default.
[[noreturn]] void InvalidField(const Reader &rd, const std::map<std::string, Entry> &seen,
                               const std::string &source, const std::string &key,
                               const std::string &msg)
{
  const auto it = seen.find(key);
  if (it != seen.end())
  {
    rd.Invalid(it->second, msg);
  }
  FailSemantic(source, "invalid value for '" + key + "': " + msg);
}

const std::set<std::string> kGlobalKeys = {
    "name",          "refinement",     "model",          "c0",
    "cr",            "delta",          "beta",           "beta_reference_sphere",
    "pencil_sign",   "separation_threshold",             "amplitude_min",
    "amplitude_max", "amplitude_count", "amplitude_scale", "starts",
    "seed",          "ds_initial",     "ds_min",         "ds_max",
    "max_points",    "amplitude_cap",  "output_dir",     "emit_csv",
    "emit_svg"};

const std::set<std::string> kSphereKeys = {"center", "radius", "cr"};

}  // namespace

std::string ToString(ExperimentModel model)
{
  switch (model)
  {
  case ExperimentModel::kLinear:
    return "linear";
  case ExperimentModel::kLeadingOrder:
    return "leading_order";
  case ExperimentModel::kKerrPencil:
    return "kerr_pencil";
  }
  return "unknown";
}

ExperimentConfig ParseConfig(const std::string &text, const std::string &source)
{
  const Document doc = Tokenize(text, source);
  const Reader rd(source);
  ExperimentConfig cfg;
  double global_cr = 1.0;
  std::map<std::string, Entry> seen;

  for (const Entry &e : doc.globals)
  {
    if (!kGlobalKeys.count(e.key))
    {
      Fail(source, e.line, e.key_column, "unknown key '" + e.key + "'");
    }
    seen[e.key] = e;
    const std::string &k = e.key;
    if (k == "name")
    {
      cfg.name = e.value;
    }
    else if (k == "refinement")
    {
      const auto v = rd.Integer(e);
      if (v < 0 || v > kMaxRefinement)
      {
        rd.Invalid(e, "must lie in [0, " + std::to_string(kMaxRefinement) + "]");
      }
      cfg.refinement = static_cast<int>(v);
    }
    else if (k == "model")
    {
      if (e.value == "linear")
      {
        cfg.model = ExperimentModel::kLinear;
      }
      else if (e.value == "leading_order")
      {
        cfg.model = ExperimentModel::kLeadingOrder;
      }
      else if (e.value == "kerr_pencil")
      {
        cfg.model = ExperimentModel::kKerrPencil;
      }
      else
      {
        rd.Invalid(e, "expected linear, leading_order or kerr_pencil");
      }
    }
    else if (k == "c0")
    {
      cfg.system.c0 = rd.Real(e);
      if (!(cfg.system.c0 > 0.0))
      {
        rd.Invalid(e, "must be positive");
      }
    }
    else if (k == "cr")
    {
      global_cr = rd.Real(e);
      if (!(global_cr > 0.0))
      {
        rd.Invalid(e, "must be positive");
      }
    }
    else if (k == "delta")
    {
      cfg.system.delta = rd.Real(e);
      if (!(cfg.system.delta >= 0.0))
      {
        rd.Invalid(e, "must be nonnegative");
      }
    }
    else if (k == "beta")
    {
      cfg.beta_input = rd.Complex(e);
    }
    else if (k == "beta_reference_sphere")
    {
      const auto v = rd.Integer(e);
      if (v < 0)
      {
        rd.Invalid(e, "must be a sphere index (1-based) or 0");
      }
      cfg.beta_reference_sphere = static_cast<int>(v);
    }
    else if (k == "pencil_sign")
    {
      if (e.value == "auto")
      {
        cfg.pencil_sign = 0;
      }
      else
      {
        const auto v = rd.Integer(e);
        if (v != 1 && v != -1)
        {
          rd.Invalid(e, "expected auto, 1 or -1");
        }
        cfg.pencil_sign = static_cast<int>(v);
      }
    }
    else if (k == "separation_threshold")
    {
      cfg.system.separation_threshold = rd.Real(e);
      if (!(cfg.system.separation_threshold >= 0.0))
      {
        rd.Invalid(e, "must be nonnegative");
      }
    }
    else if (k == "amplitude_min")
    {
      cfg.amplitude_min = rd.Real(e);
    }
    else if (k == "amplitude_max")
    {
      cfg.amplitude_max = rd.Real(e);
    }
    else if (k == "amplitude_count")
    {
      const auto v = rd.Integer(e);
      if (v < 1 || v > 100000)
      {
        rd.Invalid(e, "must lie in [1, 100000]");
      }
      cfg.amplitude_count = static_cast<int>(v);
    }
    else if (k == "amplitude_scale")
    {
      if (e.value != "linear" && e.value != "log")
      {
        rd.Invalid(e, "expected linear or log");
      }
      cfg.amplitude_log = e.value == "log";
    }
    else if (k == "starts")
    {
      const auto v = rd.Integer(e);
      if (v < 0 || v > 1000000)
      {
        rd.Invalid(e, "must lie in [0, 1000000]");
      }
      cfg.starts = static_cast<int>(v);
    }
    else if (k == "seed")
    {
      const auto v = rd.Integer(e);
      if (v < 0)
      {
        rd.Invalid(e, "must be nonnegative");
      }
      cfg.seed = static_cast<std::uint64_t>(v);
    }
    else if (k == "ds_initial")
    {
      cfg.steps.ds_initial = rd.Real(e);
    }
    else if (k == "ds_min")
    {
      cfg.steps.ds_min = rd.Real(e);
    }
    else if (k == "ds_max")
    {
      cfg.steps.ds_max = rd.Real(e);
    }
    else if (k == "max_points")
    {
      const auto v = rd.Integer(e);
      if (v < 2 || v > 10000000)
      {
        rd.Invalid(e, "must lie in [2, 10000000]");
      }
      cfg.steps.max_points = static_cast<int>(v);
    }
    else if (k == "amplitude_cap")
    {
      cfg.amplitude_cap = rd.Real(e);
      if (!(cfg.amplitude_cap > 0.0))
      {
        rd.Invalid(e, "must be positive");
      }
    }
    else if (k == "output_dir")
    {
      cfg.output_dir = e.value;
    }
    else if (k == "emit_csv")
    {
      cfg.emit_csv = rd.Boolean(e);
    }
    else if (k == "emit_svg")
    {
      cfg.emit_svg = rd.Boolean(e);
    }
  }

  if (!(cfg.amplitude_min > 0.0))
  {
    InvalidField(rd, seen, source, "amplitude_min", "must be positive");
  }
  if (!(cfg.amplitude_max >= cfg.amplitude_min))
  {
    InvalidField(rd, seen, source, "amplitude_max", "must be at least amplitude_min");
  }
  const StepControl &st = cfg.steps;
  if (!(st.ds_min > 0.0) || !(st.ds_min <= st.ds_initial) || !(st.ds_initial <= st.ds_max))
  {
    InvalidField(rd, seen, source, seen.count("ds_initial") ? "ds_initial" : "ds_min",
                 "step sizes need 0 < ds_min <= ds_initial <= ds_max");
  }

  if (doc.spheres.empty())
  {
    FailSemantic(source, "at least one [sphere] section is required");
  }
  std::vector<double> crs;
  for (std::size_t s = 0; s < doc.spheres.size(); s++)
  {
    SphereSpec sphere;
    bool has_center = false, has_radius = false;
    double cr = global_cr;
    for (const Entry &e : doc.spheres[s])
    {
      if (!kSphereKeys.count(e.key))
      {
        Fail(source, e.line, e.key_column, "unknown key '" + e.key + "' in [sphere]");
      }
      if (e.key == "center")
      {
        const auto v = rd.List(e, 3);
        sphere.center = Vec3(v[0], v[1], v[2]);
        has_center = true;
      }
      else if (e.key == "radius")
      {
        sphere.radius = rd.Real(e);
        if (!(sphere.radius > 0.0))
        {
          rd.Invalid(e, "must be positive");
        }
        has_radius = true;
      }
      else if (e.key == "cr")
      {
        cr = rd.Real(e);
        if (!(cr > 0.0))
        {
          rd.Invalid(e, "must be positive");
        }
      }
    }
    if (!has_center || !has_radius)
    {
      Fail(source, doc.sphere_lines[s], 1,
           std::string("[sphere] section is missing '") + (has_center ? "radius" : "center") +
               "'");
    }
    cfg.system.spheres.push_back(sphere);
    crs.push_back(cr);
  }
  bool uniform = true;
  for (double c : crs)
  {
    uniform = uniform && c == crs.front();
  }
  cfg.system.cr = uniform ? std::vector<double>{crs.front()} : crs;
  if (!uniform && cfg.model != ExperimentModel::kLinear)
  {
    FailSemantic(source, "invalid value for 'cr': nonlinear models need a uniform cr");
  }
  if (cfg.model == ExperimentModel::kKerrPencil && !(cfg.system.delta > 0.0))
  {
    InvalidField(rd, seen, source, "delta", "the kerr_pencil model needs delta > 0");
  }

  if (cfg.beta_reference_sphere > static_cast<int>(cfg.system.spheres.size()))
  {
    InvalidField(rd, seen, source, "beta_reference_sphere", "no such sphere");
  }
  cfg.system.beta = cfg.beta_input;
  if (cfg.beta_reference_sphere > 0)
  {
    const double vol = cfg.system.spheres[cfg.beta_reference_sphere - 1].Volume();
    cfg.system.beta = cfg.beta_input / (vol * vol);
  }

  try
  {
    ValidateSystem(cfg.system);
  }
  catch (const GeometryError &err)
  {
    throw ConfigError(source + ": " + err.what());
  }
  return cfg;
}

ExperimentConfig LoadConfig(const std::string &path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in)
  {
    throw ConfigError(path + ": cannot open configuration file");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return ParseConfig(buf.str(), path);
}

std::string EchoConfig(const ExperimentConfig &c)
{
  std::ostringstream out;
  const auto num = [](double x) { return FormatNumber(x); };
  out << "# resolved configuration\n";
  out << "name = " << c.name << "\n";
  out << "model = " << ToString(c.model) << "\n";
  out << "refinement = " << c.refinement << "\n";
  out << "c0 = " << num(c.system.c0) << "\n";
  out << "delta = " << num(c.system.delta) << "\n";
  out << "beta = " << num(c.beta_input.real()) << "," << num(c.beta_input.imag()) << "\n";
  out << "beta_reference_sphere = " << c.beta_reference_sphere << "\n";
  out << "# beta after scaling = " << num(c.system.beta.real()) << ","
      << num(c.system.beta.imag()) << "\n";
  out << "pencil_sign = " << (c.pencil_sign == 0 ? std::string("auto") : std::to_string(c.pencil_sign))
      << "\n";
  out << "separation_threshold = " << num(c.system.separation_threshold) << "\n";
  out << "amplitude_min = " << num(c.amplitude_min) << "\n";
  out << "amplitude_max = " << num(c.amplitude_max) << "\n";
  out << "amplitude_count = " << c.amplitude_count << "\n";
  out << "amplitude_scale = " << (c.amplitude_log ? "log" : "linear") << "\n";
  out << "starts = " << c.starts << "\n";
  out << "seed = " << c.seed << "\n";
  out << "ds_initial = " << num(c.steps.ds_initial) << "\n";
  out << "ds_min = " << num(c.steps.ds_min) << "\n";
  out << "ds_max = " << num(c.steps.ds_max) << "\n";
  out << "max_points = " << c.steps.max_points << "\n";
  out << "amplitude_cap = " << num(c.amplitude_cap) << "\n";
  out << "output_dir = " << c.output_dir << "\n";
  out << "emit_csv = " << (c.emit_csv ? "true" : "false") << "\n";
  out << "emit_svg = " << (c.emit_svg ? "true" : "false") << "\n";
  for (std::size_t j = 0; j < c.system.Size(); j++)
  {
    const SphereSpec &s = c.system.spheres[j];
    out << "\n[sphere]\n";
    out << "center = " << num(s.center.x()) << ", " << num(s.center.y()) << ", "
        << num(s.center.z()) << "\n";
    out << "radius = " << num(s.radius) << "\n";
    out << "cr = " << num(c.system.WaveSpeed(j)) << "\n";
  }
  return out.str();
}

}  // namespace capres

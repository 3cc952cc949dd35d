#include "grnn/spec_io.hpp"

#include "grnn/errors.hpp"

#include <json.hpp>

#include <fstream>
#include <set>
#include <sstream>

namespace grnn {

using json = nlohmann::json;
using ordered_json = nlohmann::ordered_json;

const char* to_string(RegulationMode mode) noexcept
{
  return mode == RegulationMode::activation ? "activation" : "repression";
}

const char* to_string(RateUnit unit) noexcept
{
  switch (unit) {
  case RateUnit::per_second:
    return "per_second";
  case RateUnit::per_minute:
    return "per_minute";
  case RateUnit::per_hour:
    return "per_hour";
  }
  return "per_second";
}

namespace {

void reject_unknown_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where)
{
  for (const auto& [key, _] : obj.items()) {
    if (!allowed.count(key)) {
      const std::string field = where.empty() ? key : where + "." + key;
      throw SpecSchemaError("unknown key '" + field + "'", field);
    }
  }
}

const json& require_key(const json& obj, const std::string& key, const std::string& where)
{
  const std::string field = where.empty() ? key : where + "." + key;
  auto it = obj.find(key);
  if (it == obj.end()) {
    throw SpecSchemaError("missing required key '" + field + "'", field);
  }
  return *it;
}

double require_number(const json& value, const std::string& field)
{
  if (!value.is_number()) {
    throw SpecSchemaError("'" + field + "' must be a number", field);
  }
  return value.get<double>();
}

std::string require_string(const json& value, const std::string& field)
{
  if (!value.is_string()) {
    throw SpecSchemaError("'" + field + "' must be a string", field);
  }
  return value.get<std::string>();
}

std::vector<std::string> require_string_array(const json& value, const std::string& field)
{
  if (!value.is_array()) {
    throw SpecSchemaError("'" + field + "' must be an array of strings", field);
  }
  std::vector<std::string> out;
  for (std::size_t i = 0; i < value.size(); ++i) {
    out.push_back(require_string(value[i], field + "[" + std::to_string(i) + "]"));
  }
  return out;
}

RegulationMode parse_mode(const std::string& text, const std::string& field)
{
  if (text == "activation") {
    return RegulationMode::activation;
  }
  if (text == "repression") {
    return RegulationMode::repression;
  }
  throw SpecSchemaError("'" + field + "' must be \"activation\" or \"repression\"", field);
}

RateUnit parse_unit(const std::string& text, const std::string& field)
{
  if (text == "per_second") {
    return RateUnit::per_second;
  }
  if (text == "per_minute") {
    return RateUnit::per_minute;
  }
  if (text == "per_hour") {
    return RateUnit::per_hour;
  }
  throw SpecSchemaError(
      "'" + field + "' must be one of per_second, per_minute, per_hour", field);
}

std::pair<std::size_t, std::size_t> line_column(std::string_view text, std::size_t byte)
{
  // nlohmann reports the 1-based byte at which the error was noticed.
  const std::size_t end = std::min(byte == 0 ? 0 : byte - 1, text.size());
  std::size_t line = 1;
  std::size_t column = 1;
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      column = 1;
    } else {
      ++column;
    }
  }
  return {line, column};
}

} // namespace

Grnn load_spec(std::string_view text)
{
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, column] = line_column(text, e.byte);
    std::ostringstream msg;
    msg << "syntax error at line " << line << ", column " << column << ": " << e.what();
    throw SpecSyntaxError(msg.str(), line, column);
  }

  if (!doc.is_object()) {
    throw SpecSchemaError("top level must be an object", "");
  }
  reject_unknown_keys(doc, {"inputs", "outputs", "genes", "edges", "units"}, "");

  Grnn net;
  net.inputs = require_string_array(require_key(doc, "inputs", ""), "inputs");
  net.outputs = require_string_array(require_key(doc, "outputs", ""), "outputs");

  const json& genes = require_key(doc, "genes", "");
  if (!genes.is_object()) {
    throw SpecSchemaError("'genes' must be an object", "genes");
  }
  for (const auto& [id, body] : genes.items()) {
    const std::string where = "genes." + id;
    if (!body.is_object()) {
      throw SpecSchemaError("'" + where + "' must be an object", where);
    }
    reject_unknown_keys(body, {"k1", "k2", "d1", "d2", "copy_number", "hill_n"}, where);
    GenePerceptron g;
    g.id = id;
    g.k1 = require_number(require_key(body, "k1", where), where + ".k1");
    g.k2 = require_number(require_key(body, "k2", where), where + ".k2");
    g.d1 = require_number(require_key(body, "d1", where), where + ".d1");
    g.d2 = require_number(require_key(body, "d2", where), where + ".d2");
    g.copy_number =
        require_number(require_key(body, "copy_number", where), where + ".copy_number");
    if (auto it = body.find("hill_n"); it != body.end()) {
      g.hill_n = require_number(*it, where + ".hill_n");
    }
    net.genes.emplace(id, g);
  }

  const json& edges = require_key(doc, "edges", "");
  if (!edges.is_array()) {
    throw SpecSchemaError("'edges' must be an array", "edges");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    const std::string where = "edges[" + std::to_string(i) + "]";
    const json& body = edges[i];
    if (!body.is_object()) {
      throw SpecSchemaError("'" + where + "' must be an object", where);
    }
    reject_unknown_keys(body, {"from", "to", "mode", "k_half"}, where);
    RegulatoryEdge e;
    e.source = require_string(require_key(body, "from", where), where + ".from");
    e.target = require_string(require_key(body, "to", where), where + ".to");
    e.mode = parse_mode(require_string(require_key(body, "mode", where), where + ".mode"),
                        where + ".mode");
    e.k_half = require_number(require_key(body, "k_half", where), where + ".k_half");
    net.edges.push_back(std::move(e));
  }

  if (auto it = doc.find("units"); it != doc.end()) {
    if (!it->is_object()) {
      throw SpecSchemaError("'units' must be an object", "units");
    }
    reject_unknown_keys(*it, {"k1", "k2", "d1", "d2"}, "units");
    for (const auto& [field, value] : it->items()) {
      const std::string where = "units." + field;
      net.units[field] = parse_unit(require_string(value, where), where);
    }
  }
  return net;
}

Grnn load_spec_file(const std::filesystem::path& path)
{
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw std::runtime_error("cannot read spec file '" + path.string() + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_spec(buf.str());
}

std::string save_spec(const Grnn& net)
{
  ordered_json doc;
  doc["inputs"] = net.inputs;
  doc["outputs"] = net.outputs;
  ordered_json genes = ordered_json::object();
  for (const auto& [id, g] : net.genes) {
    ordered_json body;
    body["k1"] = g.k1;
    body["k2"] = g.k2;
    body["d1"] = g.d1;
    body["d2"] = g.d2;
    body["copy_number"] = g.copy_number;
    body["hill_n"] = g.hill_n;
    genes[id] = std::move(body);
  }
  doc["genes"] = std::move(genes);
  ordered_json edges = ordered_json::array();
  for (const auto& e : net.edges) {
    ordered_json body;
    body["from"] = e.source;
    body["to"] = e.target;
    body["mode"] = to_string(e.mode);
    body["k_half"] = e.k_half;
    edges.push_back(std::move(body));
  }
  doc["edges"] = std::move(edges);
  if (!net.units.empty()) {
    ordered_json units = ordered_json::object();
    for (const auto& [field, unit] : net.units) {
      units[field] = to_string(unit);
    }
    doc["units"] = std::move(units);
  }
  return doc.dump(2) + "\n";
}

} // namespace grnn

#include "kgframe/exec/table_io.hpp"

#include <json.hpp>
#include <ostream>
#include <sstream>

#include "kgframe/error.hpp"

namespace kgframe {

using nlohmann::json;

TableFormat parse_table_format(std::string_view name) {
  if (name == "csv") return TableFormat::kCsv;
  if (name == "tsv") return TableFormat::kTsv;
  if (name == "json") return TableFormat::kJson;
  throw Error("unknown output format '" + std::string(name) + "' (expected csv, tsv or json)");
}

namespace {

Term term_from_json(const json& v) {
  const std::string type = v.at("type").get<std::string>();
  const std::string value = v.at("value").get<std::string>();
  if (type == "uri") return Term::iri(value);
  if (type == "bnode") return Term::blank(value);
  if (type == "literal" || type == "typed-literal") {
    if (auto lang = v.find("xml:lang"); lang != v.end()) return Term::lang_literal(value, lang->get<std::string>());
    std::string dt;
    if (auto d = v.find("datatype"); d != v.end()) dt = d->get<std::string>();
    if (dt == vocab::xsd("string")) dt.clear();
    return Term::literal(value, dt);
  }
  throw EndpointError("unknown RDF term type '" + type + "' in results");
}

json term_to_json(const Term& t) {
  if (t.is_iri()) return {{"type", "uri"}, {"value", t.as_iri().value}};
  if (t.is_blank()) return {{"type", "bnode"}, {"value", t.as_blank().label}};
  const Literal& l = t.as_literal();
  json j = {{"type", "literal"}, {"value", l.lexical}};
  if (!l.language.empty()) j["xml:lang"] = l.language;
  else if (!l.datatype.empty()) j["datatype"] = l.datatype;
  return j;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

std::string csv_value(const Cell& c) {
  if (!c) return {};
  if (c->is_blank()) return "_:" + c->as_blank().label;
  return c->text();
}

}  // namespace

ResultTable parse_results_json(std::string_view body) {
  json doc = json::parse(body, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw EndpointError("endpoint returned a body that is not JSON");
  try {
    ResultTable t;
    for (const auto& v : doc.at("head").at("vars")) t.columns.push_back(v.get<std::string>());
    for (const auto& b : doc.at("results").at("bindings")) {
      Row r(t.columns.size());
      for (auto it = b.begin(); it != b.end(); ++it) {
        auto i = t.index_of(it.key());
        if (!i) {
          // tolerate bindings for variables missing from head.vars
          t.columns.push_back(it.key());
          for (auto& prev : t.rows) prev.emplace_back();
          r.emplace_back();
          i = t.columns.size() - 1;
        }
        r[*i] = term_from_json(it.value());
      }
      t.rows.push_back(std::move(r));
    }
    return t;
  } catch (const json::exception& e) {
    throw EndpointError(std::string("malformed SPARQL results document: ") + e.what());
  }
}

void write_table(std::ostream& out, const ResultTable& table, TableFormat format) {
  switch (format) {
    case TableFormat::kCsv: {
      for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "," : "") << csv_field(table.columns[i]);
      out << "\r\n";
      for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "," : "") << csv_field(csv_value(r[i]));
        out << "\r\n";
      }
      return;
    }
    case TableFormat::kTsv: {
      for (std::size_t i = 0; i < table.columns.size(); ++i) out << (i ? "\t" : "") << '?' << table.columns[i];
      out << '\n';
      for (const auto& r : table.rows) {
        for (std::size_t i = 0; i < r.size(); ++i) out << (i ? "\t" : "") << (r[i] ? r[i]->to_ntriples() : "");
        out << '\n';
      }
      return;
    }
    case TableFormat::kJson: {
      json doc;
      doc["head"]["vars"] = table.columns;
      json bindings = json::array();
      for (const auto& r : table.rows) {
        json b = json::object();
        for (std::size_t i = 0; i < r.size(); ++i)
          if (r[i]) b[table.columns[i]] = term_to_json(*r[i]);
        bindings.push_back(std::move(b));
      }
      doc["results"]["bindings"] = std::move(bindings);
      out << doc.dump(2) << '\n';
      return;
    }
  }
}

std::string format_table(const ResultTable& table, TableFormat format) {
  std::ostringstream s;
  write_table(s, table, format);
  return s.str();
}

}  // namespace kgframe

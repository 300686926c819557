// Copyright 2026 The ppsyn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ppsyn/io.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>
#include <unordered_map>

#include "ppsyn/errors.hpp"

namespace ppsyn {
namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open '" + path.string() + "'");
  return in;
}

nlohmann::json read_json(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  try {
    return nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw InvalidArgument("'" + path.string() + "': " + e.what());
  }
}

bool needs_quoting(const std::string& s) {
  return s.find_first_of(",\"\r\n") != std::string::npos;
}

void write_field(std::ostream& out, const std::string& s) {
  if (!needs_quoting(s)) {
    out << s;
    return;
  }
  out << '"';
  for (char c : s) {
    if (c == '"') out << '"';
    out << c;
  }
  out << '"';
}

}  // namespace

DomainSpec parse_schema(const nlohmann::json& j) {
  if (!j.is_object() || !j.contains("attributes") ||
      !j["attributes"].is_array()) {
    throw InvalidArgument("schema must be an object with an 'attributes' array");
  }
  std::vector<Attribute> attrs;
  for (const auto& a : j["attributes"]) {
    if (!a.is_object() || !a.contains("name") || !a["name"].is_string()) {
      throw InvalidArgument("schema attribute needs a string 'name'");
    }
    Attribute attr;
    attr.name = a["name"].get<std::string>();
    if (!a.contains("values") || !a["values"].is_array()) {
      throw InvalidArgument("schema attribute '" + attr.name +
                            "' needs a 'values' array");
    }
    std::unordered_map<std::string, int> seen;
    for (const auto& v : a["values"]) {
      std::string label = v.is_string() ? v.get<std::string>() : v.dump();
      if (seen[label]++ > 0) {
        throw InvalidArgument("schema attribute '" + attr.name +
                              "' repeats value '" + label + "'");
      }
      attr.values.push_back(std::move(label));
    }
    if (attr.values.empty()) {
      throw InvalidArgument("schema attribute '" + attr.name +
                            "' has no values");
    }
    attr.cardinality = attr.values.size();
    attr.ordinal = a.value("ordinal", false);
    attrs.push_back(std::move(attr));
  }
  return DomainSpec(std::move(attrs));
}

DomainSpec load_schema(const std::filesystem::path& path) {
  return parse_schema(read_json(path));
}

nlohmann::json schema_to_json(const DomainSpec& domain) {
  nlohmann::json attrs = nlohmann::json::array();
  for (const Attribute& a : domain.attributes()) {
    nlohmann::json values = nlohmann::json::array();
    if (a.values.empty()) {
      for (std::size_t v = 0; v < a.cardinality; ++v) {
        values.push_back(std::to_string(v));
      }
    } else {
      for (const auto& v : a.values) values.push_back(v);
    }
    attrs.push_back({{"name", a.name}, {"values", values}, {"ordinal", a.ordinal}});
  }
  return {{"attributes", attrs}};
}

std::vector<std::vector<std::string>> parse_csv(std::istream& in) {
  std::vector<std::vector<std::string>> records;
  std::vector<std::string> record;
  std::string field;
  bool in_quotes = false;
  bool after_quote = false;  // just closed a quoted field
  bool record_started = false;
  std::size_t line = 1;

  auto end_field = [&] {
    record.push_back(std::move(field));
    field.clear();
    after_quote = false;
  };
  auto end_record = [&] {
    end_field();
    records.push_back(std::move(record));
    record.clear();
    record_started = false;
  };

  char c;
  while (in.get(c)) {
    if (in_quotes) {
      if (c == '"') {
        if (in.peek() == '"') {
          in.get(c);
          field.push_back('"');
        } else {
          in_quotes = false;
          after_quote = true;
        }
      } else {
        if (c == '\n') ++line;
        field.push_back(c);
      }
      continue;
    }
    switch (c) {
      case ',':
        end_field();
        record_started = true;
        break;
      case '\r':
        if (in.peek() == '\n') in.get(c);
        [[fallthrough]];
      case '\n':
        end_record();
        ++line;
        break;
      case '"':
        if (!field.empty() || after_quote) {
          throw InvalidArgument("CSV line " + std::to_string(line) +
                                ": unexpected quote inside unquoted field");
        }
        in_quotes = true;
        record_started = true;
        break;
      default:
        if (after_quote) {
          throw InvalidArgument("CSV line " + std::to_string(line) +
                                ": characters after closing quote");
        }
        field.push_back(c);
        record_started = true;
    }
  }
  if (in_quotes) {
    throw InvalidArgument("CSV line " + std::to_string(line) +
                          ": unterminated quoted field");
  }
  if (record_started || !field.empty() || after_quote) end_record();
  return records;
}

Dataset parse_dataset(std::istream& csv, const DomainSpec& domain) {
  auto records = parse_csv(csv);
  if (records.empty()) throw InvalidArgument("CSV is missing its header row");
  const auto& header = records.front();
  const std::size_t d = domain.size();

  // column -> attribute index
  std::vector<std::size_t> column_attr(header.size());
  std::vector<bool> covered(d, false);
  for (std::size_t c = 0; c < header.size(); ++c) {
    std::size_t a;
    try {
      a = domain.index_of(header[c]);
    } catch (const InvalidArgument&) {
      throw InvalidArgument("CSV header: unknown column '" + header[c] + "'");
    }
    if (covered[a]) {
      throw InvalidArgument("CSV header: duplicate column '" + header[c] + "'");
    }
    covered[a] = true;
    column_attr[c] = a;
  }
  for (std::size_t a = 0; a < d; ++a) {
    if (!covered[a]) {
      throw InvalidArgument("CSV header: missing column '" +
                            domain.attribute(a).name + "'");
    }
  }

  std::vector<std::unordered_map<std::string, std::uint32_t>> dict(d);
  for (std::size_t a = 0; a < d; ++a) {
    const Attribute& attr = domain.attribute(a);
    for (std::size_t v = 0; v < attr.cardinality; ++v) {
      dict[a].emplace(attr.values.empty() ? std::to_string(v) : attr.values[v],
                      static_cast<std::uint32_t>(v));
    }
  }

  std::vector<Row> rows;
  rows.reserve(records.size() - 1);
  for (std::size_t r = 1; r < records.size(); ++r) {
    const auto& rec = records[r];
    if (rec.size() != header.size()) {
      throw InvalidArgument("CSV row " + std::to_string(r) + ": expected " +
                            std::to_string(header.size()) + " fields, got " +
                            std::to_string(rec.size()));
    }
    Row row(d);
    for (std::size_t c = 0; c < rec.size(); ++c) {
      const std::size_t a = column_attr[c];
      auto it = dict[a].find(rec[c]);
      if (it == dict[a].end()) {
        throw InvalidArgument("CSV row " + std::to_string(r) + ", column '" +
                              header[c] + "': value '" + rec[c] +
                              "' not in schema");
      }
      row[a] = it->second;
    }
    rows.push_back(std::move(row));
  }
  return Dataset(domain, std::move(rows));
}

Dataset load_dataset(const std::filesystem::path& csv_path,
                     const DomainSpec& domain) {
  std::ifstream in = open_input(csv_path);
  return parse_dataset(in, domain);
}

Dataset load_dataset(const std::filesystem::path& csv_path,
                     const std::filesystem::path& schema_path) {
  return load_dataset(csv_path, load_schema(schema_path));
}

void write_csv(std::ostream& out, const Dataset& data) {
  const DomainSpec& domain = data.domain();
  for (std::size_t a = 0; a < domain.size(); ++a) {
    if (a > 0) out << ',';
    write_field(out, domain.attribute(a).name);
  }
  out << '\n';
  for (const Row& row : data.rows()) {
    for (std::size_t a = 0; a < domain.size(); ++a) {
      if (a > 0) out << ',';
      const Attribute& attr = domain.attribute(a);
      if (attr.values.empty()) {
        out << row[a];
      } else {
        write_field(out, attr.values[row[a]]);
      }
    }
    out << '\n';
  }
}

void write_csv(const std::filesystem::path& path, const Dataset& data) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InvalidArgument("cannot write '" + path.string() + "'");
  write_csv(out, data);
}

Workload parse_workload(const nlohmann::json& j, const DomainSpec& domain) {
  if (!j.is_object() || !j.contains("cliques") || !j["cliques"].is_array()) {
    throw InvalidArgument("workload must be an object with a 'cliques' array");
  }
  const auto& cliques = j["cliques"];
  const bool has_weights = j.contains("weights");
  if (has_weights &&
      (!j["weights"].is_array() || j["weights"].size() != cliques.size())) {
    throw InvalidArgument("workload 'weights' must parallel 'cliques'");
  }
  Workload w;
  for (std::size_t k = 0; k < cliques.size(); ++k) {
    if (!cliques[k].is_array() || cliques[k].empty()) {
      throw InvalidArgument("workload clique " + std::to_string(k) +
                            " must be a non-empty array of names");
    }
    std::vector<std::size_t> attrs;
    for (const auto& name : cliques[k]) {
      if (!name.is_string()) {
        throw InvalidArgument("workload clique " + std::to_string(k) +
                              ": attribute names must be strings");
      }
      attrs.push_back(domain.index_of(name.get<std::string>()));
    }
    std::sort(attrs.begin(), attrs.end());
    if (std::adjacent_find(attrs.begin(), attrs.end()) != attrs.end()) {
      throw InvalidArgument("workload clique " + std::to_string(k) +
                            " repeats an attribute");
    }
    double weight = has_weights ? j["weights"][k].get<double>() : 1.0;
    w.entries.push_back({Clique(std::move(attrs), domain), weight});
  }
  validate_workload(w);
  if (w.empty()) throw InvalidArgument("workload is empty");
  return w;
}

Workload load_workload(const std::filesystem::path& path,
                       const DomainSpec& domain) {
  return parse_workload(read_json(path), domain);
}

nlohmann::json workload_to_json(const Workload& w, const DomainSpec& domain) {
  nlohmann::json cliques = nlohmann::json::array();
  nlohmann::json weights = nlohmann::json::array();
  for (const auto& e : w.entries) {
    nlohmann::json names = nlohmann::json::array();
    for (std::size_t a : e.clique.attrs()) names.push_back(domain.attribute(a).name);
    cliques.push_back(names);
    weights.push_back(e.weight);
  }
  return {{"cliques", cliques}, {"weights", weights}};
}

}  // namespace ppsyn

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

#include <sstream>

#include <gtest/gtest.h>

#include "ppsyn/errors.hpp"

namespace ppsyn {
namespace {

using nlohmann::json;

DomainSpec color_size_schema() {
  return parse_schema(json::parse(R"({"attributes":[
    {"name":"color","values":["red","green"],"ordinal":false},
    {"name":"size","values":["S","L"],"ordinal":true}]})"));
}

Dataset parse(const std::string& text, const DomainSpec& d) {
  std::istringstream in(text);
  return parse_dataset(in, d);
}

std::string message_of(const std::string& text, const DomainSpec& d) {
  try {
    parse(text, d);
  } catch (const InvalidArgument& e) {
    return e.what();
  }
  return "";
}

TEST(SchemaTest, ParsesValuesAndOrdinality) {
  const DomainSpec d = color_size_schema();
  ASSERT_EQ(d.size(), 2u);
  EXPECT_EQ(d.cardinality(0), 2u);
  EXPECT_FALSE(d.attribute(0).ordinal);
  EXPECT_TRUE(d.attribute(1).ordinal);
  EXPECT_EQ(d.attribute(1).values[1], "L");
  EXPECT_EQ(parse_schema(schema_to_json(d)), d);
}

TEST(SchemaTest, RejectsMalformed) {
  EXPECT_THROW(parse_schema(json::parse(R"({"attrs":[]})")), InvalidArgument);
  EXPECT_THROW(parse_schema(json::parse(R"({"attributes":[{"name":"a"}]})")),
               InvalidArgument);
  EXPECT_THROW(parse_schema(json::parse(R"({"attributes":[{"name":"a","values":[]}]})")),
               InvalidArgument);
  EXPECT_THROW(
      parse_schema(json::parse(R"({"attributes":[{"name":"a","values":["x","x"]}]})")),
      InvalidArgument);
}

TEST(CsvTest, HandlesQuotesCrlfAndEmbeddedNewlines) {
  std::istringstream in("a,b\r\n\"x,1\",\"say \"\"hi\"\"\"\r\n\"multi\nline\",z");
  const auto rec = parse_csv(in);
  ASSERT_EQ(rec.size(), 3u);
  EXPECT_EQ(rec[1][0], "x,1");
  EXPECT_EQ(rec[1][1], "say \"hi\"");
  EXPECT_EQ(rec[2][0], "multi\nline");
  EXPECT_EQ(rec[2][1], "z");
}

TEST(CsvTest, RejectsUnterminatedQuote) {
  std::istringstream in("a\n\"open");
  EXPECT_THROW(parse_csv(in), InvalidArgument);
}

TEST(DatasetLoadTest, MapsLabelsToIndices) {
  const DomainSpec d = color_size_schema();
  const Dataset data = parse("color,size\nred,L\ngreen,S\nred,S\n", d);
  EXPECT_EQ(data.n(), 3u);
  EXPECT_EQ(data.domain().size(), 2u);
  EXPECT_EQ(data.rows()[0], (Row{0, 1}));
  EXPECT_EQ(data.rows()[1], (Row{1, 0}));
}

TEST(DatasetLoadTest, ColumnOrderFollowsHeader) {
  const DomainSpec d = color_size_schema();
  const Dataset data = parse("size,color\nL,green\n", d);
  EXPECT_EQ(data.rows()[0], (Row{1, 1}));
}

TEST(DatasetLoadTest, EmptyBodyGivesEmptyDataset) {
  EXPECT_EQ(parse("color,size\n", color_size_schema()).n(), 0u);
}

TEST(DatasetLoadTest, ErrorsNameTheProblem) {
  const DomainSpec d = color_size_schema();
  const std::string unknown_value = message_of("color,size\nred,L\nblue,S\n", d);
  EXPECT_NE(unknown_value.find("row 2"), std::string::npos) << unknown_value;
  EXPECT_NE(unknown_value.find("color"), std::string::npos) << unknown_value;
  EXPECT_NE(unknown_value.find("blue"), std::string::npos) << unknown_value;

  const std::string unknown_column = message_of("color,weight\nred,1\n", d);
  EXPECT_NE(unknown_column.find("weight"), std::string::npos) << unknown_column;

  const std::string ragged = message_of("color,size\nred\n", d);
  EXPECT_NE(ragged.find("row 1"), std::string::npos) << ragged;
}

TEST(DatasetLoadTest, WriteThenReadRoundTrips) {
  const DomainSpec d = parse_schema(json::parse(R"({"attributes":[
    {"name":"city","values":["Paris, FR","x\"y"]},{"name":"n","values":["0","1","2"]}]})"));
  const Dataset data(d, {{0, 2}, {1, 0}, {1, 1}});
  std::ostringstream out;
  write_csv(out, data);
  EXPECT_EQ(out.str(), "city,n\n\"Paris, FR\",2\n\"x\"\"y\",0\n\"x\"\"y\",1\n");
  const Dataset back = parse(out.str(), d);
  EXPECT_EQ(back.rows(), data.rows());
}

TEST(DatasetLoadTest, LoadsFromFiles) {
  const std::string dir = PPSYN_TEST_DATA_DIR;
  const Dataset data = load_dataset(dir + "/toy.csv", dir + "/toy_schema.json");
  EXPECT_EQ(data.n(), 400u);
  EXPECT_EQ(data.domain().size(), 4u);
  EXPECT_THROW(load_dataset(dir + "/missing.csv", dir + "/toy_schema.json"),
               InvalidArgument);
}

TEST(WorkloadIoTest, ResolvesNamesAndSortsAttributes) {
  const DomainSpec d = color_size_schema();
  const Workload w =
      parse_workload(json::parse(R"({"cliques":[["size","color"],["size"]],"weights":[2,1]})"), d);
  ASSERT_EQ(w.size(), 2u);
  EXPECT_EQ(w.entries[0].clique.attrs(), (std::vector<std::size_t>{0, 1}));
  EXPECT_EQ(w.entries[0].weight, 2.0);
  EXPECT_EQ(parse_workload(workload_to_json(w, d), d).entries[1].clique.attrs(),
            (std::vector<std::size_t>{1}));
}

TEST(WorkloadIoTest, RejectsBadInput) {
  const DomainSpec d = color_size_schema();
  EXPECT_THROW(parse_workload(json::parse(R"({"cliques":[["shape"]]})"), d), InvalidArgument);
  EXPECT_THROW(parse_workload(json::parse(R"({"cliques":[["size","size"]]})"), d),
               InvalidArgument);
  EXPECT_THROW(parse_workload(json::parse(R"({"cliques":[]})"), d), InvalidArgument);
  EXPECT_THROW(parse_workload(json::parse(R"({"cliques":[["size"],["size"]]})"), d),
               InvalidArgument);
}

}  // namespace
}  // namespace ppsyn

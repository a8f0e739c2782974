#include <gtest/gtest.h>

#include <string>

#include "topmix/ingestion.hpp"

using namespace topmix;

namespace {

SchemaSpec toy_schema() {
  SchemaSpec s;
  s.attributes = {{"age", AttributeKind::Numeric, {}}, {"color", AttributeKind::Categorical, {"r", "g", "b"}}};
  s.target = {"sick", {PositiveRule::Kind::GreaterThan, 0.0, {}}, std::nullopt};
  return s;
}

SchemaSpec cleveland_schema() { return load_schema(std::string(TOPMIX_DATA_DIR) + "/cleveland.schema.json"); }

}  // namespace

TEST(BinarizeTarget, ClevelandRule) {
  const PositiveRule rule{PositiveRule::Kind::GreaterThan, 0.0, {}};
  EXPECT_EQ(binarize_target("0", rule), Label::Negative);
  EXPECT_EQ(binarize_target("3", rule), Label::Positive);
  EXPECT_EQ(binarize_target("1", rule), Label::Positive);
  EXPECT_EQ(binarize_target("4", rule), Label::Positive);
  EXPECT_EQ(binarize_target("0.0", rule), Label::Negative);
}

TEST(BinarizeTarget, UnparseableTokenThrows) {
  const PositiveRule rule{PositiveRule::Kind::GreaterThan, 0.0, {}};
  EXPECT_THROW(binarize_target("sick", rule), ParseError);
  EXPECT_THROW(binarize_target("", rule), ParseError);
}

TEST(BinarizeTarget, OneOfRule) {
  const PositiveRule rule{PositiveRule::Kind::OneOf, 0.0, {"yes", "Y"}};
  EXPECT_EQ(binarize_target("yes", rule), Label::Positive);
  EXPECT_EQ(binarize_target("no", rule), Label::Negative);
}

TEST(ParseDataset, EmptyFile) {
  const auto ds = parse_dataset(std::string_view(""), toy_schema());
  EXPECT_EQ(ds.size(), 0u);
  EXPECT_EQ(ds.report.total_rows, 0u);
  EXPECT_EQ(ds.report.dropped_rows, 0u);
}

TEST(ParseDataset, DropsIncompleteRowsAndReportsThem) {
  const auto ds = parse_dataset(std::string_view("30,r,0\n?,g,1\n41,b,2\n"), toy_schema());
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds.report.total_rows, 3u);
  EXPECT_EQ(ds.report.retained_rows, 2u);
  EXPECT_EQ(ds.report.dropped_rows, 1u);
  EXPECT_EQ(ds.report.dropped, std::vector<std::size_t>{1});
  EXPECT_EQ(ds.rows[0].source_row, 0u);
  EXPECT_EQ(ds.rows[1].source_row, 2u);
  EXPECT_DOUBLE_EQ(std::get<double>(ds.rows[1].values[0]), 41.0);
  EXPECT_EQ(std::get<std::size_t>(ds.rows[1].values[1]), 2u);
  EXPECT_EQ(ds.rows[0].label, Label::Negative);
  EXPECT_EQ(ds.rows[1].label, Label::Positive);
}

TEST(ParseDataset, WrongFieldCountReportsRow) {
  try {
    parse_dataset(std::string_view("30,r,0\n31,g\n"), toy_schema());
    FAIL() << "expected ParseError";
  } catch (const ParseError& e) {
    EXPECT_EQ(e.row(), 1u);
  }
}

TEST(ParseDataset, TokenOutsideDomain) {
  EXPECT_THROW(parse_dataset(std::string_view("30,purple,0\n"), toy_schema()), SchemaError);
}

TEST(ParseDataset, NonFiniteNumeric) {
  EXPECT_THROW(parse_dataset(std::string_view("inf,r,0\n"), toy_schema()), ParseError);
  EXPECT_THROW(parse_dataset(std::string_view("nan,r,0\n"), toy_schema()), ParseError);
  EXPECT_THROW(parse_dataset(std::string_view("3x,r,0\n"), toy_schema()), ParseError);
}

TEST(ParseDataset, HeaderDelimiterAndTargetColumn) {
  auto s = toy_schema();
  s.target.column = 0;
  const auto ds = parse_dataset(std::string_view("sick;age;color\n1;30;g\n"), s, {';', true});
  ASSERT_EQ(ds.size(), 1u);
  EXPECT_EQ(ds.rows[0].label, Label::Positive);
  EXPECT_DOUBLE_EQ(std::get<double>(ds.rows[0].values[0]), 30.0);
  EXPECT_EQ(std::get<std::size_t>(ds.rows[0].values[1]), 1u);
}

TEST(ParseDataset, Deterministic) {
  const std::string text = "30,r,0\n?,g,1\n41,b,2\n";
  const auto a = parse_dataset(std::string_view(text), toy_schema());
  const auto b = parse_dataset(std::string_view(text), toy_schema());
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a.rows[i].values, b.rows[i].values);
    EXPECT_EQ(a.rows[i].label, b.rows[i].label);
  }
}

TEST(Schema, Invariants) {
  auto s = toy_schema();
  s.attributes.push_back({"age", AttributeKind::Numeric, {}});
  EXPECT_THROW(s.validate(), SchemaError);

  s = toy_schema();
  s.attributes[1].domain = {};
  EXPECT_THROW(s.validate(), SchemaError);

  s = toy_schema();
  s.attributes[1].domain = {"r", "r"};
  EXPECT_THROW(s.validate(), SchemaError);

  s = toy_schema();
  s.target.name = "age";
  EXPECT_THROW(s.validate(), SchemaError);
}

TEST(Schema, JsonRoundTrip) {
  const auto s = cleveland_schema();
  EXPECT_EQ(schema_from_json(schema_to_json(s)), s);
  auto t = toy_schema();
  t.target.rule = {PositiveRule::Kind::OneOf, 0.0, {"a", "b"}};
  t.target.column = 1;
  t.missing_token = "NA";
  EXPECT_EQ(schema_from_json(schema_to_json(t)), t);
}

TEST(Cleveland, Retains297CompleteRows) {
  const auto s = cleveland_schema();
  EXPECT_EQ(s.attributes.size(), 13u);
  const auto ds = parse_dataset(std::string_view(read_file(std::string(TOPMIX_DATA_DIR) + "/processed.cleveland.data")), s);
  EXPECT_EQ(ds.report.total_rows, 303u);
  EXPECT_EQ(ds.size(), 297u);
  EXPECT_EQ(ds.report.dropped_rows, 6u);
  EXPECT_EQ(ds.report.retained_rows + ds.report.dropped_rows, ds.report.total_rows);

  std::size_t positives = 0;
  for (const auto& r : ds.rows) positives += r.label == Label::Positive;
  // 160 healthy / 137 diseased: ~54% / ~46%.
  EXPECT_EQ(positives, 137u);
  EXPECT_NEAR(100.0 * (297 - positives) / 297.0, 54.0, 1.0);
}

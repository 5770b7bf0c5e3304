#include <gtest/gtest.h>

#include <json.hpp>

#include "monadforge/acceptance/oracles.hpp"
#include "monadforge/rng.hpp"
#include "monadforge/serialization.hpp"
#include "test_support.hpp"

using namespace monadforge;
using nlohmann::json;

namespace {

ErrorKind parse_error(const std::string& text) {
  try {
    parse_configuration(text);
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "parsed: " << text;
  return ErrorKind::Shape;
}

json valid_doc() { return to_json(test::valid_k1n2()); }

}  // namespace

TEST(Serialization, DocumentLayout) {
  const json doc = valid_doc();
  EXPECT_EQ(doc.at("schema_version"), "monad-forge/1");
  EXPECT_EQ(doc.at("k"), 1);
  EXPECT_EQ(doc.at("n"), 2);
  EXPECT_EQ(doc.at("b"), json::parse("[[[0.0, 0.0], [1.0, 0.0]]]"));
  EXPECT_EQ(doc.at("c"), json::parse("[[[1.0, 0.0]], [[0.0, 0.0]]]"));
}

TEST(Serialization, RoundTripBitExact) {
  Rng rng(51);
  for (int trial = 0; trial < 100; ++trial) {
    Configuration c = oracle::gaussian_configuration(trial % 4, 1 + trial % 3, rng);
    if (trial % 5 == 1) c = c * Complex(1e-300);
    if (trial % 5 == 2) c = c * Complex(0.1, 1e17);
    if (trial % 5 == 3) c = c * Complex(1.0 / 3.0, -2.0 / 7.0);
    const std::string text = serialize(c);
    const Configuration back = parse_configuration(text);
    EXPECT_TRUE(back == c) << trial;
    EXPECT_EQ(serialize(back), text);
  }
}

TEST(Serialization, NegativeZeroAndSubnormals) {
  ComplexMatrix a(1, 1);
  a(0, 0) = Complex(-0.0, 4.9406564584124654e-324);
  const Configuration c(1, 1, a, a, a, a, a);
  const Configuration back = parse_configuration(serialize(c));
  EXPECT_TRUE(std::signbit(back.a1()(0, 0).real()));
  EXPECT_EQ(back.a1()(0, 0).imag(), 4.9406564584124654e-324);
}

TEST(Serialization, SchemaErrors) {
  EXPECT_EQ(parse_error("not json"), ErrorKind::Schema);
  EXPECT_EQ(parse_error("[1, 2]"), ErrorKind::Schema);

  json doc = valid_doc();
  doc["schema_version"] = "monad-forge/2";
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  doc = valid_doc();
  doc.erase("x");
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  doc = valid_doc();
  doc["n"] = 3;  // b and c no longer match
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  doc = valid_doc();
  doc["a1"] = json::parse("[[[1.0]]]");
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  doc = valid_doc();
  doc["a1"] = json::parse("[[[\"1\", 0]]]");
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  doc = valid_doc();
  doc["k"] = -1;
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  doc = valid_doc();
  doc["n"] = 0;
  EXPECT_EQ(parse_error(doc.dump()), ErrorKind::Schema);

  // Overflowing literal is not a finite double.
  std::string text = valid_doc().dump();
  text.replace(text.find("[1.0,0.0]"), 9, "[1e999,0.0]");
  EXPECT_EQ(parse_error(text), ErrorKind::Schema);
}

TEST(Serialization, EmptyChargeDocument) {
  const Configuration c = Configuration::zero(0, 3);
  const json doc = to_json(c);
  EXPECT_EQ(doc.at("a1"), json::array());
  EXPECT_EQ(doc.at("c").size(), 3u);
  EXPECT_TRUE(parse_configuration(serialize(c)) == c);
}

TEST(Serialization, ReportJson) {
  const json valid = to_json(validate(test::valid_k1n2()));
  EXPECT_TRUE(valid.at("valid").get<bool>());
  EXPECT_TRUE(valid.at("witness").is_null());

  const json zero = to_json(validate(Configuration::zero(1, 1)));
  EXPECT_FALSE(zero.at("nondegenerate").get<bool>());
  EXPECT_EQ(zero.at("witness").at("side"), "forward");

  const json empty = to_json(validate(Configuration::zero(0, 1)));
  EXPECT_EQ(empty.at("margin"), "inf");
}

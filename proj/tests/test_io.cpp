#include "lidreg/errors.hpp"
#include "lidreg/io.hpp"

#include <gtest/gtest.h>

#include <sstream>

using namespace lidreg;

namespace {

BatchCollection read(const std::string& text) {
  std::istringstream in(text);
  return read_batches_csv(in);
}

FlatConfig parse(const std::string& text) {
  std::istringstream in(text);
  return parse_flat_config(in);
}

}  // namespace

TEST(Csv, ReadsGroupedBatches) {
  const BatchCollection coll = read("batch_id,x_0,x_1,y\nb,1,2,3\nb,4,5,6\na,0,0,-1\na,1,1,1e-3\n");
  ASSERT_EQ(coll.size(), 2u);
  EXPECT_EQ(coll.batch_size(), 2u);
  EXPECT_EQ(coll.dim(), 2u);
  EXPECT_DOUBLE_EQ(coll[0].covariates()(1, 0), 4.0);
  EXPECT_DOUBLE_EQ(coll[1].responses()(1), 1e-3);
}

TEST(Csv, RoundTripIsBitExact) {
  std::vector<Batch> batches;
  Matrix x(2, 2);
  x << 0.1, 1.0 / 3.0, -2.5e-300, 12345.678901234567;
  batches.emplace_back(x, Vector::Constant(2, 2.0 / 7.0));
  batches.emplace_back(-x, Vector::Constant(2, -1e10 / 3.0));
  const BatchCollection coll(batches);
  std::stringstream buf;
  write_batches_csv(buf, coll);
  const BatchCollection back = read_batches_csv(buf);
  ASSERT_EQ(back.size(), 2u);
  for (std::size_t b = 0; b < 2; ++b) {
    EXPECT_EQ(back[b].covariates(), coll[b].covariates());
    EXPECT_EQ(back[b].responses(), coll[b].responses());
  }
}

TEST(Csv, RejectsMalformedInput) {
  EXPECT_THROW(read(""), DataFormatError);
  EXPECT_THROW(read("id,x_0,y\n"), DataFormatError);
  EXPECT_THROW(read("batch_id,x_0,x_2,y\n"), DataFormatError);
  EXPECT_THROW(read("batch_id,x_0,y\n"), DataFormatError);
  EXPECT_THROW(read("batch_id,x_0,y\na,1\n"), DataFormatError);
  EXPECT_THROW(read("batch_id,x_0,y\na,1,abc\n"), DataFormatError);
  EXPECT_THROW(read("batch_id,x_0,y\na,1,nan\n"), DataFormatError);
  EXPECT_THROW(read("batch_id,x_0,y\na,1,2\nb,1,2\na,1,2\nb,3,4\n"), DataFormatError);  // not contiguous
  EXPECT_THROW(read("batch_id,x_0,y\na,1,2\na,1,2\nb,3,4\n"), DataFormatError);         // ragged
}

TEST(FlatConfig, ParsesCommentsAndWhitespace) {
  const FlatConfig f = parse("# header\n alpha = 0.5 # trailing\n\nsigma=2\n");
  EXPECT_EQ(f.size(), 2u);
  EXPECT_EQ(f.at("alpha"), "0.5");
  EXPECT_EQ(f.at("sigma"), "2");
}

TEST(FlatConfig, RejectsBadLines) {
  EXPECT_THROW(parse("alpha\n"), DataFormatError);
  EXPECT_THROW(parse("= 3\n"), DataFormatError);
  EXPECT_THROW(parse("alpha = 1\nalpha = 2\n"), DataFormatError);
  EXPECT_THROW(check_known_keys(parse("alpah = 1\n")), DataFormatError);
  EXPECT_NO_THROW(check_known_keys(parse("alpha = 1\nd = 3\nc3 = 2\n")));
  EXPECT_THROW(algo_config_from_flat(parse("c2 = fast\n")), DataFormatError);
  EXPECT_THROW(algo_config_from_flat(parse("max_filter_calls = -3\n")), DataFormatError);
  EXPECT_THROW(generator_spec_from_flat(parse("adversary = sneaky\n")), DataFormatError);
}

TEST(FlatConfig, AlgoConfigRoundTrip) {
  AlgoConfig cfg;
  cfg.alpha = 0.125;
  cfg.sigma = 1.0 / 3.0;
  cfg.c3 = 17.5;
  cfg.max_filter_calls = 99;
  cfg.rng_seed = 18446744073709551615ULL;
  const AlgoConfig back = algo_config_from_flat(parse(to_flat(cfg)));
  EXPECT_EQ(back.alpha, cfg.alpha);
  EXPECT_EQ(back.sigma, cfg.sigma);
  EXPECT_EQ(back.c3, cfg.c3);
  EXPECT_EQ(back.max_filter_calls, cfg.max_filter_calls);
  EXPECT_EQ(back.rng_seed, cfg.rng_seed);
  EXPECT_EQ(to_flat(back), to_flat(cfg));
}

TEST(FlatConfig, GeneratorSpecRoundTrip) {
  const GeneratorSpec spec = generator_spec_from_flat(
      parse("d = 3\nm = 40\nk = 3\nw_radius = 2\nw_separation = 1\nadversary = mirror\nadv_scale = 1.5\nseed = 4\n"));
  EXPECT_EQ(spec.w_stars.size(), 3u);
  EXPECT_NEAR(spec.w_stars[1].norm(), 2.0, 1e-12);
  EXPECT_EQ(spec.adversary, Adversary::mirror);
  const GeneratorSpec back = generator_spec_from_flat(parse(to_flat(spec)));
  ASSERT_EQ(back.w_stars.size(), 3u);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_EQ(back.w_stars[j], spec.w_stars[j]);
  EXPECT_EQ(to_flat(back), to_flat(spec));
}

TEST(Vectors, ParseAndFormat) {
  const Vector v = parse_vector(" 1, -2.5 ,3e-2");
  ASSERT_EQ(v.size(), 3);
  EXPECT_DOUBLE_EQ(v(2), 0.03);
  EXPECT_EQ(parse_vector(format_vector(v)), v);
  EXPECT_THROW(parse_vector(""), DataFormatError);
  EXPECT_THROW(parse_vector("1,,2"), DataFormatError);
  EXPECT_EQ(format_double(0.1), "0.10000000000000001");
}

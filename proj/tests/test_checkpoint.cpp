#include <gtest/gtest.h>

#include <sstream>

#include "trajcast/core/rng.hpp"
#include "trajcast/nn/checkpoint.hpp"
#include "trajcast/nn/variants.hpp"

using namespace trajcast;

namespace {

ModelParams sample_params(uint64_t seed = 21) {
  ModelConfig c = scaled_config(variant_config("reference"), 8);
  return init_params(c, seed);
}

std::string saved_bytes(const ModelParams& p, const CheckpointMeta& meta = {5, 77}) {
  std::ostringstream out;
  save_checkpoint(out, p, meta);
  return out.str();
}

}  // namespace

TEST(Checkpoint, RoundTripIsBitwise) {
  const ModelParams p = sample_params();
  const std::string bytes = saved_bytes(p);
  std::istringstream in(bytes);
  const auto [loaded, meta] = load_checkpoint(in);
  EXPECT_EQ(meta.seed, 5u);
  EXPECT_EQ(meta.step, 77u);
  EXPECT_EQ(loaded.config, p.config);
  auto va = param_views(const_cast<ModelParams&>(p));
  auto vb = param_views(const_cast<ModelParams&>(loaded));
  ASSERT_EQ(va.size(), vb.size());
  for (size_t i = 0; i < va.size(); ++i) {
    ASSERT_EQ(va[i].size(), vb[i].size());
    for (size_t k = 0; k < va[i].size(); ++k) EXPECT_EQ(va[i].data[k], vb[i].data[k]);
  }

  // saving the loaded params reproduces the same bytes
  EXPECT_EQ(saved_bytes(loaded), bytes);
}

TEST(Checkpoint, ForwardOutputsPreservedExactly) {
  const ModelParams p = sample_params(31);
  std::istringstream in(saved_bytes(p));
  const auto [loaded, meta] = load_checkpoint(in);
  Rng rng(3);
  Mat seq(20, p.config.input_size);
  for (double& x : seq.a) x = rng.uniform(-2, 2);
  const Mat a = model_forward(p, seq).outputs;
  const Mat b = model_forward(loaded, seq).outputs;
  EXPECT_EQ(a.a, b.a);
}

TEST(Checkpoint, TruncatedFileDetected) {
  const std::string bytes = saved_bytes(sample_params());
  std::istringstream in(bytes.substr(0, bytes.size() - 8));
  try {
    load_checkpoint(in);
    FAIL() << "expected checkpoint_error";
  } catch (const checkpoint_error& e) {
    EXPECT_EQ(e.kind(), checkpoint_error_kind::truncated);
  }
}

TEST(Checkpoint, HeaderBlockShapeMismatchDetected) {
  std::string bytes = saved_bytes(sample_params());
  const auto pos = bytes.find("lstm_layers=8");
  ASSERT_NE(pos, std::string::npos);
  bytes.replace(pos, std::string("lstm_layers=8").size(), "lstm_layers=4");
  std::istringstream in(bytes);
  try {
    load_checkpoint(in);
    FAIL() << "expected checkpoint_error";
  } catch (const checkpoint_error& e) {
    EXPECT_EQ(e.kind(), checkpoint_error_kind::shape_mismatch);
  }
}

TEST(Checkpoint, VersionMismatchDetected) {
  std::string bytes = saved_bytes(sample_params());
  const std::string v1 = std::string(kCheckpointMagic) + " v1";
  bytes.replace(bytes.find(v1), v1.size(), std::string(kCheckpointMagic) + " v9");
  std::istringstream in(bytes);
  try {
    load_checkpoint(in);
    FAIL() << "expected checkpoint_error";
  } catch (const checkpoint_error& e) {
    EXPECT_EQ(e.kind(), checkpoint_error_kind::version_mismatch);
  }
}

TEST(Checkpoint, NotACheckpointDetected) {
  std::istringstream in("something else entirely\n");
  try {
    load_checkpoint(in);
    FAIL() << "expected checkpoint_error";
  } catch (const checkpoint_error& e) {
    EXPECT_EQ(e.kind(), checkpoint_error_kind::bad_header);
  }
}

TEST(Checkpoint, FileRoundTripAtomicWrite) {
  const ModelParams p = sample_params(8);
  const std::string path = testing::TempDir() + "/trajcast_ckpt_test.tckpt";
  save_checkpoint_file(path, p, {1, 2});
  const auto [loaded, meta] = load_checkpoint_file(path);
  EXPECT_EQ(meta.step, 2u);
  EXPECT_EQ(loaded.config, p.config);
  EXPECT_EQ(loaded.output.w.a, p.output.w.a);
  std::remove(path.c_str());
  EXPECT_THROW(load_checkpoint_file(path), data_error);
}

#include <gtest/gtest.h>

#include <filesystem>
#include <sstream>

#include "abelcode/cli.hpp"
#include "support.hpp"

using namespace abelcode;
namespace fs = std::filesystem;

namespace {

const std::string kSamples = ABELCODE_SAMPLES_DIR;

std::string sample(const std::string& name) { return kSamples + "/" + name; }

struct CliResult {
  int code;
  std::string out, err;
};

CliResult cli_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

class Scratch : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("abelcode_test_" + std::to_string(::testing::UnitTest::GetInstance()->random_seed()) +
                                        "_" + ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    write_file(path(name), text);
    return path(name);
  }

  fs::path dir_;
};

std::string parse_error(const std::string& text) {
  try {
    parse_input(text);
  } catch (const InputError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Parse, GroupFile) {
  const InputFile in = parse_input(R"({"components": [[4], [2]], "generators": [[[1], [1]]]})");
  EXPECT_FALSE(in.is_template());
  EXPECT_EQ(in.source.group().order(), 4);
  EXPECT_EQ(in.hash.rfind("fnv1a64:", 0), 0u);
  // key order does not change the hash
  EXPECT_EQ(in.hash, parse_input(R"({"generators": [[[1], [1]]], "components": [[4], [2]]})").hash);
}

TEST(Parse, ErrorsNameThePath) {
  EXPECT_NE(parse_error("{").find("malformed JSON"), std::string::npos);
  EXPECT_NE(parse_error("[]").find("JSON object"), std::string::npos);
  EXPECT_NE(parse_error("{}").find("component_template"), std::string::npos);
  EXPECT_NE(parse_error(R"({"components": [[6]], "generators": []})").find("/components/0"), std::string::npos);
  EXPECT_NE(parse_error(R"({"components": [[4]], "generators": [[[1], [1]]]})").find("/generators/0"), std::string::npos);
  EXPECT_NE(parse_error(R"({"components": [[4]], "generators": [[[7]]]})").find("/generators/0/0"), std::string::npos);
  EXPECT_NE(parse_error(R"({"component_template": {"period": 1, "orders": [[4]]},
    "shifted_generators": [{"start": 0, "stride": 1, "pattern": {"0": [1]}}]})")
                .find("/shifted_generators/0/start"),
            std::string::npos);
}

TEST(Parse, TemplateRoundTrip) {
  const TemplateSpec t = testing_support::chain_template();
  const TemplateSpec back = template_from_json(Json::parse(template_to_json(t).dump()));
  EXPECT_EQ(unroll_template(back, 5).subgroup, unroll_template(t, 5).subgroup);
}

TEST(Parse, GroupRoundTrip) {
  std::mt19937 rng(1);
  for (int k = 0; k < 10; ++k) {
    const WindowSubgroup g = testing_support::random_mixed_group(rng);
    EXPECT_EQ(group_from_json(Json::parse(group_to_json(g).dump())), g);
  }
}

TEST(Parse, CertificateRoundTrip) {
  const auto src = GroupSource::from_template(testing_support::chain_template());
  const Certificate c = certify_order_controllable(src, 4);
  const WindowPtr w = src.view(4).prefix.window_ptr();
  const Certificate back = certificate_from_json(Json::parse(certificate_to_json(c).dump()), w);
  EXPECT_EQ(back.status, c.status);
  EXPECT_EQ(back.indices, c.indices);
  EXPECT_EQ(back.witness, c.witness);
  EXPECT_THROW(certificate_from_json(Json::parse(R"({"property": "bogus", "status": "holds", "window": 2})"), w), InputError);
}

TEST(Parse, EncoderRoundTrip) {
  const WindowSubgroup g = unroll_template(testing_support::chain_template(), 5).truncated;
  const GeneratingSet gs = synthesize_p(g, 2, certify_order_controllable(GroupSource::from_group(g), 5));
  const GeneratingSet back = encoder_from_json(Json::parse(encoder_to_json(gs).dump()));
  EXPECT_EQ(back.generators, gs.generators);
  EXPECT_EQ(back.heights, gs.heights);
  EXPECT_EQ(back.n_sequence, gs.n_sequence);
  ASSERT_EQ(back.blocks.size(), gs.blocks.size());
  for (std::size_t k = 0; k < gs.blocks.size(); ++k) EXPECT_EQ(back.blocks[k].count, gs.blocks[k].count);
  EXPECT_TRUE(verify_block_properties(back, g).all_passed());

  Json bad = Json::parse(encoder_to_json(gs).dump());
  bad["orders"][0] = 8;
  EXPECT_THROW(encoder_from_json(bad), InputError);
  bad = Json::parse(encoder_to_json(gs).dump());
  bad["prime"] = 4;
  EXPECT_THROW(encoder_from_json(bad), InputError);
}

TEST(Cli, HelpAndUsage) {
  EXPECT_EQ(cli_run({"--help"}).code, 0);
  EXPECT_EQ(cli_run({}).code, 3);
  EXPECT_EQ(cli_run({"check"}).code, 3);
  EXPECT_EQ(cli_run({"frobnicate"}).code, 3);
}

TEST(Cli, CheckExitCodes) {
  const CliResult fails = cli_run({"check", "--input", sample("cyclic_chain_z4.json"), "--window", "6"});
  EXPECT_EQ(fails.code, 1);
  const Json c = Json::parse(fails.out);
  EXPECT_EQ(c["status"], "fails");
  EXPECT_EQ(c["witness"], Json::parse("[[2],[2],[2],[2],[2],[2]]"));
  EXPECT_EQ(c["witness_detail"]["companion_order"], 4);

  EXPECT_EQ(cli_run({"check", "--input", sample("cyclic_chain_z4.json"), "--window", "2"}).code, 2);
  EXPECT_EQ(cli_run({"check", "--input", sample("cyclic_chain_z4.json")}).code, 3);
  EXPECT_EQ(cli_run({"check", "--input", sample("rectangular_z4_z2.json")}).code, 0);
  EXPECT_EQ(cli_run({"check", "--input", sample("rectangular_z4_z2.json"), "--window", "3"}).code, 3);
  EXPECT_EQ(cli_run({"check", "--input", sample("rectangular_z4_z2.json"), "--property", "nope"}).code, 3);
  EXPECT_EQ(cli_run({"check", "--input", sample("rectangular_z4_z2.json"), "--max-index", "5"}).code, 3);
  EXPECT_EQ(cli_run({"check", "--input", sample("missing.json")}).code, 3);
  EXPECT_EQ(
      cli_run({"check", "--input", sample("cyclic_chain_z4.json"), "--window", "6", "--property", "controllable"}).code, 0);
}

TEST_F(Scratch, CertificateReplay) {
  const std::string cert = path("cert.json");
  ASSERT_EQ(cli_run({"check", "--input", sample("cyclic_chain_z4.json"), "--window", "4", "--out", cert}).code, 1);
  EXPECT_EQ(cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "4", "--certificate", cert}).code, 0);
  Json j = parse_json_file(cert);
  j["status"] = "holds";
  const std::string forged = write("forged.json", j.dump());
  EXPECT_EQ(cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "4", "--certificate", forged}).code, 1);
  EXPECT_EQ(cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "5", "--certificate", cert}).code, 3);
}

TEST_F(Scratch, SynthesizeAndVerify) {
  const std::string out = path("enc");
  ASSERT_EQ(cli_run({"synthesize", "--input", sample("cyclic_chain_z4.json"), "--window", "6", "--closure", "--out", out}).code, 0);
  const std::string manifest = out + "/manifest.json";
  EXPECT_EQ(cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "6", "--closure", "--manifest", manifest}).code,
            0);
  const std::string enc = out + "/encoder_p2.json";
  EXPECT_EQ(cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "6", "--closure", "--encoder", enc}).code, 0);
  // the finite part is a different group
  EXPECT_EQ(cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "6", "--encoder", enc}).code, 1);

  Json j = parse_json_file(enc);
  j["heights"][1] = 0;
  j.erase("orders");
  j.erase("socle");
  const std::string tampered = write("tampered.json", j.dump());
  const CliResult r = cli_run({"verify", "--input", sample("cyclic_chain_z4.json"), "--window", "6", "--closure", "--encoder", tampered});
  EXPECT_EQ(r.code, 1);
  EXPECT_FALSE(Json::parse(r.out)["passed"].get<bool>());
}

TEST_F(Scratch, SynthesizeRefusals) {
  EXPECT_EQ(cli_run({"synthesize", "--input", sample("cyclic_chain_z4.json"), "--window", "6"}).code, 1);
  EXPECT_EQ(cli_run({"synthesize", "--input", sample("cyclic_chain_z4.json"), "--window", "2"}).code, 2);
  EXPECT_EQ(cli_run({"verify", "--input", sample("rectangular_z4_z2.json")}).code, 3);
}

TEST_F(Scratch, MixedSample) {
  const std::string out = path("mixed");
  ASSERT_EQ(cli_run({"synthesize", "--input", sample("mixed_z6.json"), "--out", out}).code, 0);
  EXPECT_TRUE(fs::exists(out + "/encoder_p2.json"));
  EXPECT_TRUE(fs::exists(out + "/encoder_p3.json"));
  EXPECT_EQ(cli_run({"verify", "--input", sample("mixed_z6.json"), "--manifest", out + "/manifest.json"}).code, 0);
  const CliResult d = cli_run({"decompose", "--input", sample("mixed_z6.json")});
  EXPECT_EQ(d.code, 0);
  EXPECT_EQ(Json::parse(d.out)["parts"].size(), 2u);
}

TEST_F(Scratch, Unroll) {
  const CliResult r = cli_run({"unroll", "--input", sample("cyclic_chain_z4.json"), "--window", "3"});
  ASSERT_EQ(r.code, 0);
  const Json j = Json::parse(r.out);
  EXPECT_EQ(j["generators"].size(), 2u);
  EXPECT_EQ(j["metadata"]["skipped"].size(), 1u);
  const std::string g = write("g.json", r.out);
  EXPECT_EQ(cli_run({"check", "--input", g}).code, 0);
  EXPECT_EQ(cli_run({"unroll", "--input", sample("mixed_z6.json")}).code, 3);
}

#include <gtest/gtest.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>
#include <vector>

namespace {

namespace fs = std::filesystem;

struct RunResult {
  int exit_code;
  std::string output;
};

RunResult run_cli(const std::string& args) {
  std::string cmd = std::string(EPIK_CLI_PATH) + " " + args + " 2>&1";
  FILE* pipe = popen(cmd.c_str(), "r");
  EXPECT_NE(pipe, nullptr);
  std::string output;
  char buf[512];
  while (fgets(buf, sizeof(buf), pipe)) output += buf;
  int status = pclose(pipe);
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return RunResult{code, output};
}

std::vector<char> slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  return std::vector<char>((std::istreambuf_iterator<char>(in)),
                           std::istreambuf_iterator<char>());
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() / ("epik_cli_" + std::to_string(::getpid()) + "_" +
                                        ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }

  std::string path(const std::string& name) { return (dir_ / name).string(); }

  fs::path dir_;
};

TEST_F(CliTest, KeygenPrintsPresetSizes) {
  auto res = run_cli("--test-mode --seed 1 keygen --preset iot --out-pk " + path("k.epk") +
                     " --out-sk " + path("k.esk"));
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("pk_bits=1152"), std::string::npos) << res.output;
  EXPECT_TRUE(fs::exists(path("k.epk")));
  EXPECT_TRUE(fs::exists(path("k.esk")));

  auto sec = run_cli("--test-mode --seed 1 keygen --preset sec128 --out-pk " +
                     path("s.epk") + " --out-sk " + path("s.esk"));
  EXPECT_NE(sec.output.find("pk_bits=16896"), std::string::npos) << sec.output;
}

TEST_F(CliTest, KeygenDeterministicUnderSeed) {
  std::string a = "keygen --preset iot --out-pk " + path("a.epk") + " --out-sk " + path("a.esk");
  std::string b = "keygen --preset iot --out-pk " + path("b.epk") + " --out-sk " + path("b.esk");
  EXPECT_EQ(run_cli("--test-mode --seed 7 " + a).exit_code, 0);
  EXPECT_EQ(run_cli("--test-mode --seed 7 " + b).exit_code, 0);
  EXPECT_EQ(slurp(path("a.epk")), slurp(path("b.epk")));
  EXPECT_EQ(slurp(path("a.esk")), slurp(path("b.esk")));
}

TEST_F(CliTest, EnvSeedMatchesFlagSeed) {
  std::string flag = "keygen --preset iot --out-pk " + path("f.epk") + " --out-sk " + path("f.esk");
  std::string env = "keygen --preset iot --out-pk " + path("e.epk") + " --out-sk " + path("e.esk");
  EXPECT_EQ(run_cli("--test-mode --seed 99 " + flag).exit_code, 0);
  ::setenv("EPIK_TEST_SEED", "99", 1);
  EXPECT_EQ(run_cli("--test-mode " + env).exit_code, 0);
  ::unsetenv("EPIK_TEST_SEED");
  EXPECT_EQ(slurp(path("f.epk")), slurp(path("e.epk")));
}

TEST_F(CliTest, BadPresetRejected) {
  auto res = run_cli("keygen --preset nope --out-pk " + path("x.epk") + " --out-sk " +
                     path("x.esk"));
  EXPECT_EQ(res.exit_code, 3) << res.output;
}

TEST_F(CliTest, FullRoundTripProducesEqualKeys) {
  ASSERT_EQ(run_cli("--test-mode --seed 3 keygen --preset iot --out-pk " + path("k.epk") +
                    " --out-sk " + path("k.esk")).exit_code, 0);
  auto enc = run_cli("--test-mode --seed 4 encap --pk " + path("k.epk") + " --out-ct " +
                     path("m.ect") + " --out-key " + path("k1.bin"));
  EXPECT_EQ(enc.exit_code, 0) << enc.output;
  auto dec = run_cli("decap --sk " + path("k.esk") + " --ct " + path("m.ect") +
                     " --out-key " + path("k2.bin"));
  EXPECT_EQ(dec.exit_code, 0) << dec.output;
  auto k1 = slurp(path("k1.bin"));
  auto k2 = slurp(path("k2.bin"));
  EXPECT_EQ(k1.size(), 32u);
  EXPECT_EQ(k1, k2);
}

TEST_F(CliTest, HexModeRoundTrip) {
  ASSERT_EQ(run_cli("--test-mode --seed 3 --hex keygen --preset iot --out-pk " +
                    path("k.epk") + " --out-sk " + path("k.esk")).exit_code, 0);
  auto enc = run_cli("--test-mode --seed 4 --hex encap --pk " + path("k.epk") +
                     " --out-ct " + path("m.ect") + " --out-key " + path("k1.bin"));
  EXPECT_EQ(enc.exit_code, 0) << enc.output;
  auto dec = run_cli("--hex decap --sk " + path("k.esk") + " --ct " + path("m.ect") +
                     " --out-key " + path("k2.bin"));
  EXPECT_EQ(dec.exit_code, 0) << dec.output;
  EXPECT_EQ(slurp(path("k1.bin")), slurp(path("k2.bin")));
}

TEST_F(CliTest, MissingFileIsIoError) {
  auto res = run_cli("encap --pk " + path("absent.epk") + " --out-ct " + path("m.ect") +
                     " --out-key " + path("k.bin"));
  EXPECT_EQ(res.exit_code, 2) << res.output;
}

TEST_F(CliTest, CorruptedCiphertextIsMalformed) {
  ASSERT_EQ(run_cli("--test-mode --seed 3 keygen --preset iot --out-pk " + path("k.epk") +
                    " --out-sk " + path("k.esk")).exit_code, 0);
  ASSERT_EQ(run_cli("--test-mode --seed 4 encap --pk " + path("k.epk") + " --out-ct " +
                    path("m.ect") + " --out-key " + path("k1.bin")).exit_code, 0);
  // truncate the ciphertext
  auto ct = slurp(path("m.ect"));
  std::ofstream out(path("m.ect"), std::ios::binary | std::ios::trunc);
  out.write(ct.data(), static_cast<std::streamsize>(ct.size() / 2));
  out.close();
  auto res = run_cli("decap --sk " + path("k.esk") + " --ct " + path("m.ect") +
                     " --out-key " + path("k2.bin"));
  EXPECT_EQ(res.exit_code, 4) << res.output;
}

TEST_F(CliTest, EngelEncodeOfOne) {
  auto res = run_cli("engel encode --input 1 --preset iot");
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("digit_count=1"), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("terminated=true"), std::string::npos) << res.output;
}

TEST_F(CliTest, EngelRoundTripViaDecode) {
  auto enc = run_cli("engel encode --input 7/3 --preset iot --depth 4");
  EXPECT_EQ(enc.exit_code, 0) << enc.output;
  auto pos = enc.output.find("digits=");
  ASSERT_NE(pos, std::string::npos);
  std::string digits = enc.output.substr(pos + 7);
  digits = digits.substr(0, digits.find('\n'));
  auto dec = run_cli("engel decode --input " + digits + " --preset iot");
  EXPECT_EQ(dec.exit_code, 0) << dec.output;
  EXPECT_NE(dec.output.find("series="), std::string::npos);
}

TEST_F(CliTest, EngelDepthCapRespected) {
  auto res = run_cli("engel encode --input 7/3 --preset iot --depth 2");
  EXPECT_EQ(res.exit_code, 0) << res.output;
  auto pos = res.output.find("digit_count=");
  ASSERT_NE(pos, std::string::npos);
  int count = std::stoi(res.output.substr(pos + 12));
  EXPECT_LE(count, 2);
}

TEST_F(CliTest, BenchWritesCsvWithFixedHeader) {
  auto res = run_cli("--test-mode --seed 5 bench --preset iot --sizes 16..64 --step 24 "
                     "--trials 11 --csv " + path("out.csv"));
  EXPECT_EQ(res.exit_code, 0) << res.output;
  std::ifstream in(path("out.csv"));
  std::string header;
  std::getline(in, header);
  EXPECT_EQ(header, "size_bytes,encrypt_us,decrypt_us,trials");
  int rows = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line[0] != '#') ++rows;
  }
  EXPECT_EQ(rows, 3);  // 16, 40, 64
}

TEST_F(CliTest, BenchLatencyActivatesChainSim) {
  auto res = run_cli("--test-mode --seed 5 bench --preset iot --sizes 16..64 --step 24 "
                     "--trials 11 --latency-ms 90 --csv " + path("out.csv"));
  EXPECT_EQ(res.exit_code, 0) << res.output;
  EXPECT_NE(res.output.find("chain_sim size="), std::string::npos) << res.output;
  EXPECT_NE(res.output.find("compute_share="), std::string::npos);
}

}  // namespace

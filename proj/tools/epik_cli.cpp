// Command-line front end: key lifecycle, encapsulation/decapsulation, Engel
// encode/decode utilities, and the timing benchmark.
//
// Exit codes: 0 success, 2 I/O failure, 3 parameter rejection, 4 malformed
// cryptographic input.

#include <cstdint>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "epik/bench.hpp"
#include "epik/codec.hpp"
#include "epik/kem.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitIo = 2;
constexpr int kExitParams = 3;
constexpr int kExitMalformed = 4;

struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// parameter rejection (exit 3), as opposed to malformed input files (exit 4)
struct ParamError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

const epik::ParamSet& lookup_preset(const std::string& name) {
  try {
    return epik::preset(name);
  } catch (const std::invalid_argument& e) {
    throw ParamError(e.what());
  }
}

struct GlobalOpts {
  bool test_mode = false;
  std::optional<uint64_t> seed;
  bool hex = false;
};

uint64_t resolve_seed(const GlobalOpts& opts) {
  if (!opts.test_mode) {
    if (opts.seed) throw CLI::ValidationError("--seed requires --test-mode");
    return 0;
  }
  if (opts.seed) return *opts.seed;
  if (const char* env = std::getenv("EPIK_TEST_SEED")) {
    return std::strtoull(env, nullptr, 10);
  }
  return 0;
}

std::unique_ptr<epik::RandomSource> make_rng(const GlobalOpts& opts) {
  if (opts.test_mode) return std::make_unique<epik::SeededRandom>(resolve_seed(opts));
  return std::make_unique<epik::SeededRandom>(epik::SeededRandom::from_entropy());
}

void write_file(const std::string& path, const std::vector<uint8_t>& data, bool hex) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open for writing: " + path);
  if (hex) {
    std::string h = epik::codec::to_hex(data);
    out.write(h.data(), static_cast<std::streamsize>(h.size()));
  } else {
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size()));
  }
  if (!out) throw IoError("write failed: " + path);
}

std::vector<uint8_t> read_file(const std::string& path, bool hex) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open: " + path);
  std::vector<char> raw((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (hex) {
    std::string h(raw.begin(), raw.end());
    while (!h.empty() && (h.back() == '\n' || h.back() == '\r')) h.pop_back();
    return epik::codec::from_hex(h);
  }
  return std::vector<uint8_t>(raw.begin(), raw.end());
}

// --input accepts an integer, a rational "a/b", or a hex canonical series.
epik::LaurentSeries parse_series_input(const std::string& input, const epik::ParamSet& params) {
  auto integral = [](const std::string& s) {
    if (s.empty()) return false;
    size_t i = s[0] == '-' ? 1 : 0;
    if (i == s.size()) return false;
    for (; i < s.size(); ++i) {
      if (!std::isdigit(static_cast<unsigned char>(s[i]))) return false;
    }
    return true;
  };
  size_t slash = input.find('/');
  if (slash != std::string::npos) {
    std::string num = input.substr(0, slash), den = input.substr(slash + 1);
    if (integral(num) && integral(den)) {
      return epik::LaurentSeries::constant(
          epik::PadicScalar::from_rational(std::stoll(num), std::stoll(den), params.prime,
                                           params.policy.digits),
          params.policy);
    }
  }
  if (integral(input)) {
    return epik::LaurentSeries::constant(
        epik::PadicScalar::from_integer(std::stoll(input), params.prime, params.policy.digits),
        params.policy);
  }
  return epik::codec::decode_series(epik::codec::from_hex(input), params.policy);
}

std::vector<uint32_t> parse_sizes(const std::string& spec, uint32_t step) {
  size_t dots = spec.find("..");
  std::vector<uint32_t> sizes;
  if (dots == std::string::npos) {
    sizes.push_back(static_cast<uint32_t>(std::stoul(spec)));
    return sizes;
  }
  uint32_t lo = static_cast<uint32_t>(std::stoul(spec.substr(0, dots)));
  uint32_t hi = static_cast<uint32_t>(std::stoul(spec.substr(dots + 2)));
  if (lo > hi || step == 0) throw CLI::ValidationError("bad size range");
  for (uint32_t s = lo; s < hi; s += step) sizes.push_back(s);
  sizes.push_back(hi);
  return sizes;
}

int cmd_keygen(const GlobalOpts& opts, const std::string& preset_name,
               const std::string& out_pk, const std::string& out_sk) {
  const epik::ParamSet& params = lookup_preset(preset_name);
  auto rng = make_rng(opts);
  std::pair<epik::PublicKey, epik::SecretKey> keys = [&] {
    try {
      return epik::keygen(params, *rng);
    } catch (const std::domain_error& e) {
      throw ParamError(e.what());  // chain extension failure rejects the parameters
    }
  }();
  auto& [pk, sk] = keys;
  std::vector<uint8_t> pk_bytes = epik::codec::encode_pk(pk);
  write_file(out_pk, pk_bytes, opts.hex);
  write_file(out_sk, epik::codec::encode_sk(sk), opts.hex);
  std::cout << "preset=" << params.name << "\n";
  std::cout << "pk_bits=" << epik::codec::pk_size_bits(params) << "\n";
  std::cout << "pk_file=" << out_pk << "\n";
  std::cout << "sk_file=" << out_sk << "\n";
  return kExitOk;
}

int cmd_encap(const GlobalOpts& opts, const std::string& pk_path, const std::string& out_ct,
              const std::string& out_key) {
  epik::PublicKey pk = epik::codec::decode_pk(read_file(pk_path, opts.hex));
  auto rng = make_rng(opts);
  auto [ct, key] = epik::encap(pk, *rng);
  write_file(out_ct, epik::codec::encode_ct(ct), opts.hex);
  write_file(out_key, std::vector<uint8_t>(key.begin(), key.end()), opts.hex);
  std::cout << "ct_file=" << out_ct << "\n";
  std::cout << "key_file=" << out_key << "\n";
  std::cout << "key_bytes=" << key.size() << "\n";
  return kExitOk;
}

int cmd_decap(const GlobalOpts& opts, const std::string& sk_path, const std::string& ct_path,
              const std::string& out_key) {
  epik::SecretKey sk = epik::codec::decode_sk(read_file(sk_path, opts.hex));
  epik::Ciphertext ct = epik::codec::decode_ct(read_file(ct_path, opts.hex));
  epik::SharedKey key = epik::decap(sk, ct);
  write_file(out_key, std::vector<uint8_t>(key.begin(), key.end()), opts.hex);
  std::cout << "key_file=" << out_key << "\n";
  std::cout << "key_bytes=" << key.size() << "\n";
  return kExitOk;
}

int cmd_engel(const GlobalOpts&, const std::string& mode, const std::string& input,
              const std::string& preset_name, uint32_t depth) {
  const epik::ParamSet& params = lookup_preset(preset_name);
  uint32_t M = depth == 0 ? params.M : depth;
  if (mode == "encode") {
    epik::LaurentSeries f = parse_series_input(input, params);
    epik::EngelExpansion e = epik::engel_encode(f, M);
    std::cout << "digit_count=" << e.digits.size() << "\n";
    std::cout << "terminated=" << (e.terminated ? "true" : "false") << "\n";
    std::cout << "residual_valuations=";
    for (size_t i = 0; i < e.residual_valuations.size(); ++i) {
      if (i) std::cout << ",";
      std::cout << e.residual_valuations[i];
    }
    std::cout << "\n";
    std::cout << "digits=" << epik::codec::to_hex(epik::codec::encode_digits(e.digits, params.prime))
              << "\n";
    return kExitOk;
  }
  if (mode == "decode") {
    std::vector<epik::EngelDigit> digits =
        epik::codec::decode_digits(epik::codec::from_hex(input), params.policy);
    epik::LaurentSeries f = epik::engel_decode(digits, params.prime, params.policy);
    std::cout << "series=" << epik::codec::to_hex(epik::codec::encode_series(f)) << "\n";
    return kExitOk;
  }
  throw CLI::ValidationError("engel mode must be encode or decode");
}

int cmd_bench(const GlobalOpts& opts, const std::string& preset_name, const std::string& sizes_spec,
              uint32_t step, uint32_t trials, const std::string& csv_path, double latency_ms,
              uint32_t nodes) {
  const epik::ParamSet& params = lookup_preset(preset_name);
  std::vector<uint32_t> sizes = parse_sizes(sizes_spec, step);
  auto rng = make_rng(opts);
  std::vector<epik::BenchSample> samples = epik::run_sweep(params, sizes, trials, *rng);
  epik::BenchReport report = epik::fit_linear(samples);
  if (!csv_path.empty()) {
    std::ofstream out(csv_path, std::ios::trunc);
    if (!out) throw IoError("cannot open for writing: " + csv_path);
    epik::write_csv(out, report);
    if (!out) throw IoError("write failed: " + csv_path);
    std::cout << "csv_file=" << csv_path << "\n";
  } else {
    epik::write_csv(std::cout, report);
  }
  std::cout << "encrypt_r_squared=" << report.encrypt_fit.r_squared << "\n";
  std::cout << "decrypt_r_squared=" << report.decrypt_fit.r_squared << "\n";
  if (latency_ms > 0) {
    auto rows = epik::chain_sim(params, latency_ms, sizes, nodes, trials, *rng);
    for (const auto& row : rows) {
      std::cout << "chain_sim size=" << row.size_bytes << " total_ms=" << row.total_ms
                << " compute_ms=" << row.compute_ms
                << " compute_share=" << row.compute_share << "\n";
    }
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Engel p-adic isogeny KEM"};
  app.require_subcommand(1);

  GlobalOpts opts;
  app.add_flag("--test-mode", opts.test_mode, "enable deterministic seeding");
  app.add_option("--seed", opts.seed, "RNG seed (test mode only)");
  app.add_flag("--hex", opts.hex, "read/write binary artifacts as hex");

  std::string preset_name = "iot";
  std::string out_pk = "key.epk", out_sk = "key.esk";
  auto* keygen_cmd = app.add_subcommand("keygen", "generate a key pair");
  keygen_cmd->add_option("--preset", preset_name, "parameter set: iot | sec128 | high");
  keygen_cmd->add_option("--out-pk", out_pk, "public key output path");
  keygen_cmd->add_option("--out-sk", out_sk, "secret key output path");

  std::string pk_path, ct_path = "msg.ect", key_path = "shared.key";
  auto* encap_cmd = app.add_subcommand("encap", "encapsulate a shared key");
  encap_cmd->add_option("--pk", pk_path, "public key path")->required();
  encap_cmd->add_option("--out-ct", ct_path, "ciphertext output path");
  encap_cmd->add_option("--out-key", key_path, "shared key output path");

  std::string sk_path, in_ct;
  std::string decap_key = "shared.key";
  auto* decap_cmd = app.add_subcommand("decap", "decapsulate a shared key");
  decap_cmd->add_option("--sk", sk_path, "secret key path")->required();
  decap_cmd->add_option("--ct", in_ct, "ciphertext path")->required();
  decap_cmd->add_option("--out-key", decap_key, "shared key output path");

  std::string engel_mode, engel_input, engel_preset = "iot";
  uint32_t engel_depth = 0;
  auto* engel_cmd = app.add_subcommand("engel", "Engel encode/decode utility");
  engel_cmd->add_option("mode", engel_mode, "encode | decode")->required();
  engel_cmd->add_option("--input", engel_input,
                        "integer, rational a/b, or hex canonical form")->required();
  engel_cmd->add_option("--preset", engel_preset, "parameter set");
  engel_cmd->add_option("--depth", engel_depth, "expansion depth (default: preset M)");

  std::string bench_preset = "iot", sizes_spec = "16..2000", csv_path;
  uint32_t step = 124, trials = 11, nodes = 4;
  double latency_ms = 0;
  auto* bench_cmd = app.add_subcommand("bench", "timing sweep and linear fit");
  bench_cmd->add_option("--preset", bench_preset, "parameter set");
  bench_cmd->add_option("--sizes", sizes_spec, "size range lo..hi or single size");
  bench_cmd->add_option("--step", step, "size increment");
  bench_cmd->add_option("--trials", trials, "trials per size (min 11)");
  bench_cmd->add_option("--csv", csv_path, "CSV output path");
  bench_cmd->add_option("--latency-ms", latency_ms, "per-hop latency for the chain simulation");
  bench_cmd->add_option("--nodes", nodes, "chain simulation node count");

  try {
    app.parse(argc, argv);
    if (keygen_cmd->parsed()) return cmd_keygen(opts, preset_name, out_pk, out_sk);
    if (encap_cmd->parsed()) return cmd_encap(opts, pk_path, ct_path, key_path);
    if (decap_cmd->parsed()) return cmd_decap(opts, sk_path, in_ct, decap_key);
    if (engel_cmd->parsed()) return cmd_engel(opts, engel_mode, engel_input, engel_preset, engel_depth);
    if (bench_cmd->parsed()) {
      return cmd_bench(opts, bench_preset, sizes_spec, step, trials, csv_path, latency_ms, nodes);
    }
    return kExitParams;
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitParams;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const std::ios_base::failure& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  } catch (const ParamError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParams;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitMalformed;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitParams;
  }
}

#include <bit>
#include <cstring>
#include <fstream>

#include "json.hpp"

#include "kmu/fading.hpp"

namespace kmu::fading {

void write_sample_dump(const std::string& path, std::span<const double> samples, const Params& p,
                       const McControl& mc, Sampler sampler) {
  std::ofstream bin(path, std::ios::binary);
  if (!bin) throw DomainError("cannot open '" + path + "' for writing");
  for (double v : samples) {
    std::uint64_t bits = std::bit_cast<std::uint64_t>(v);
    unsigned char bytes[8];
    for (int i = 0; i < 8; ++i) bytes[i] = static_cast<unsigned char>(bits >> (8 * i));
    bin.write(reinterpret_cast<const char*>(bytes), 8);
  }
  if (!bin) throw DomainError("write to '" + path + "' failed");

  nlohmann::ordered_json side;
  side["params"] = {{"kappa", p.kappa}, {"mu", p.mu}, {"m", p.m}, {"gamma_bar", p.gamma_bar}};
  side["seed"] = mc.seed;
  side["streams"] = mc.streams;
  side["n"] = samples.size();
  side["sampler"] = to_string(sampler);
  side["format"] = "float64-le";
  std::ofstream js(path + ".json");
  if (!js) throw DomainError("cannot open '" + path + ".json' for writing");
  js << side.dump(2) << '\n';
}

}  // namespace kmu::fading

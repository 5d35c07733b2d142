#include "cgpl/gen_cache.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <fstream>
#include <sstream>

#include "cgpl/diagnostics.hpp"

namespace cgpl {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int length = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &length, EVP_sha256(), nullptr) != 1) {
    throw std::runtime_error("SHA-256 computation failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * length);
  for (unsigned int i = 0; i < length; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xf]);
  }
  return out;
}

namespace {

bool is_digest(std::string_view s) {
  return s.size() == 64 && std::all_of(s.begin(), s.end(), [](char c) {
           return (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
         });
}

}  // namespace

GenCache GenCache::parse(std::string_view text) {
  GenCache cache;
  std::istringstream in{std::string(text)};
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream fields(line);
    std::string artifact, key, content, extra;
    if (!(fields >> artifact >> key >> content) || (fields >> extra)) continue;
    if (!is_digest(key) || !is_digest(content)) continue;
    cache.entries[artifact] = {key, content};
  }
  return cache;
}

std::string GenCache::serialize() const {
  std::string out;
  for (const auto& [artifact, e] : entries) {
    out += artifact + " " + e.key_digest + " " + e.content_digest + "\n";
  }
  return out;
}

GenCache GenCache::load(const std::filesystem::path& dir) {
  std::ifstream in(dir / kFileName, std::ios::binary);
  if (!in) return {};
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void GenCache::save(const std::filesystem::path& dir) const {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw IoError("cannot create cache directory " + dir.string() + ": " + ec.message());
  auto tmp = dir / (std::string(kFileName) + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    out << serialize();
    if (!out) throw IoError("cannot write " + tmp.string());
  }
  std::filesystem::rename(tmp, dir / kFileName, ec);
  if (ec) throw IoError("cannot replace " + (dir / kFileName).string() + ": " + ec.message());
}

std::string compute_key_digest(const CacheKeyInput& input) {
  std::ostringstream s;
  s << "cgpl-artifact-key 1\n";
  s << "artifact " << input.artifact << "\n";
  s << "component " << input.component_id << " " << input.component_version << "\n";
  s << "mode " << to_string(input.mode) << "\n";
  for (const auto& [name, value] : input.options) {
    s << "option " << name << "=" << to_string(value) << "\n";
  }
  for (const auto& [name, text] : input.variation_points) {
    s << "vp " << name << " " << text.size() << ":" << text << "\n";
  }
  s << "input " << input.input_text.size() << ":" << input.input_text << "\n";
  std::vector<Fact> facts = input.consumed_facts;
  std::sort(facts.begin(), facts.end());
  for (const auto& f : facts) s << "fact " << to_string(f) << "\n";
  return sha256_hex(s.str());
}

}  // namespace cgpl

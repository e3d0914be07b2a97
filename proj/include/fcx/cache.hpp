#pragma once

// On-disk cache of computed payloads, keyed by a stable hash of a canonical
// spec string. Entries record the tool version and the full spec; a version
// or spec mismatch is a miss, and unreadable entries are discarded.

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <random>
#include <stdexcept>
#include <ostream>
#include <string>

#include <json.hpp>

namespace fcx {

#ifndef FCX_VERSION
#define FCX_VERSION "0.1.0"
#endif

  //! FNV-1a, 64 bit.
  inline std::uint64_t stable_hash(std::string const& s) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : s) {
      h ^= c;
      h *= 0x100000001b3ULL;
    }
    return h;
  }

  inline std::string hash_hex(std::string const& s) {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx",
                  static_cast<unsigned long long>(stable_hash(s)));
    return buf;
  }

  class Cache {
   public:
    //! Throws std::filesystem::filesystem_error if the directory cannot be
    //! created.
    Cache(std::filesystem::path dir, std::string version = FCX_VERSION,
          std::ostream* warnings = nullptr)
        : dir_(std::move(dir)), version_(std::move(version)), warn_(warnings) {
      std::filesystem::create_directories(dir_);
    }

    std::filesystem::path path_for(std::string const& spec) const {
      return dir_ / (hash_hex(spec) + ".json");
    }

    //! The stored payload, if present, current and accepted by `validate`.
    std::optional<nlohmann::json>
    lookup(std::string const& spec,
           std::function<bool(nlohmann::json const&)> const& validate = {}) const {
      auto const p = path_for(spec);
      if (!std::filesystem::exists(p)) {
        return std::nullopt;
      }
      nlohmann::json entry;
      try {
        std::ifstream in(p);
        entry = nlohmann::json::parse(in);
      } catch (nlohmann::json::exception const&) {
        discard(p, "unreadable cache entry");
        return std::nullopt;
      }
      if (!entry.is_object() || entry.value("version", "") != version_
          || entry.value("spec", "") != spec || !entry.contains("payload")) {
        return std::nullopt;
      }
      bool ok = true;
      if (validate) {
        try {
          ok = validate(entry["payload"]);
        } catch (std::exception const&) {
          ok = false;
        }
      }
      if (!ok) {
        discard(p, "cache entry failed revalidation");
        return std::nullopt;
      }
      return entry["payload"];
    }

    //! Writes to a temporary file in the cache directory, then renames it
    //! into place.
    void store(std::string const& spec, nlohmann::json const& payload) const {
      nlohmann::json entry{{"version", version_}, {"spec", spec}, {"payload", payload}};
      auto const     p   = path_for(spec);
      auto           tmp = p;
      tmp += ".tmp" + std::to_string(std::random_device{}());
      {
        std::ofstream out(tmp, std::ios::trunc);
        out << entry.dump();
        if (!out) {
          throw std::runtime_error("cannot write cache entry " + tmp.string());
        }
      }
      std::filesystem::rename(tmp, p);
    }

    std::filesystem::path const& dir() const noexcept {
      return dir_;
    }

   private:
    void discard(std::filesystem::path const& p, char const* why) const {
      if (warn_ != nullptr) {
        *warn_ << "warning: " << why << " " << p.string() << ", recomputing\n";
      }
      std::error_code ec;
      std::filesystem::remove(p, ec);
    }

    std::filesystem::path dir_;
    std::string           version_;
    std::ostream*         warn_;
  };

}  // namespace fcx

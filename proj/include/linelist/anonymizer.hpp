#pragma once

#include <string>
#include <vector>

#include "linelist/core.hpp"

namespace linelist::anon {

// Memory-hard keyed hashing parameters (scrypt cost).
struct AnonConfig {
    std::string secret_key;       // >= 16 bytes, from the environment
    unsigned long work_factor = 16384;  // N, power of two
    unsigned long block_size = 8;       // r
    unsigned long parallelism = 1;      // p
    std::size_t id_length = 16;         // hex characters
    // Salt scope: per-batch by default so ids do not link across batches.
    std::string batch_salt;
};

// Environment variable holding the key.
inline constexpr const char* kKeyEnvVar = "LINELIST_ANON_KEY";

// Validates key length and cost parameters; throws ConfigError.
void validate(const AnonConfig& cfg);

AnonConfig config_from_environment();

struct StripResult {
    RawRecord record;
    std::vector<CellVerdict> verdicts;
    // The removed values, for leak checks downstream.
    std::vector<std::string> removed_values;
};

// Blanks Name/Contact cells and logs each blanking.
StripResult strip_identifiers(const RawRecord& record, const ColumnMapping& mapping);

// Keyed scrypt over the identifier fields plus the batch salt, hex-encoded
// and truncated to id_length.
std::string pseudonymize(const RawRecord& record, const ColumnMapping& mapping,
                         const AnonConfig& cfg);

std::string pseudonymize_fields(const std::vector<std::string>& identifier_fields,
                                const AnonConfig& cfg);

}  // namespace linelist::anon

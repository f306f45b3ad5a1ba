#include "linelist/anonymizer.hpp"

#include <cstdlib>
#include <stdexcept>

#include <openssl/evp.h>

namespace linelist::anon {

void validate(const AnonConfig& cfg) {
    if (cfg.secret_key.size() < 16)
        throw ConfigError("anonymizer key must be at least 16 bytes (set " +
                          std::string(kKeyEnvVar) + ")");
    if (cfg.id_length < 16)
        throw ConfigError("anonymized id length must be at least 16 characters");
    if (cfg.work_factor < 2 || (cfg.work_factor & (cfg.work_factor - 1)) != 0)
        throw ConfigError("scrypt work factor must be a power of two >= 2");
    if (cfg.block_size == 0 || cfg.parallelism == 0)
        throw ConfigError("scrypt block size and parallelism must be positive");
}

AnonConfig config_from_environment() {
    AnonConfig cfg;
    const char* key = std::getenv(kKeyEnvVar);
    if (!key || !*key)
        throw ConfigError(std::string("missing anonymizer key: set ") + kKeyEnvVar);
    cfg.secret_key = key;
    validate(cfg);
    return cfg;
}

StripResult strip_identifiers(const RawRecord& record, const ColumnMapping& mapping) {
    StripResult result;
    result.record = record;
    for (std::size_t i = 0; i < mapping.entries.size() && i < record.cells.size(); ++i) {
        Role role = mapping.entries[i].role;
        if (role != Role::Name && role != Role::Contact) continue;
        CellVerdict v;
        v.row_index = record.row_index;
        v.role = role;
        v.phase = Phase::Edited;
        v.rule_id = "identifier-removed";
        // The raw value must not reach the audit trail; record only that
        // something was there.
        v.before = record.cells[i].empty() ? "" : "[redacted]";
        v.after = "";
        if (record.cells[i].empty()) {
            v.action = Action::Unchanged;
            v.rule_id = "";
        } else {
            v.action = Action::Deleted;
            result.removed_values.push_back(record.cells[i]);
            result.record.cells[i].clear();
        }
        result.verdicts.push_back(std::move(v));
    }
    return result;
}

std::string pseudonymize_fields(const std::vector<std::string>& identifier_fields,
                                const AnonConfig& cfg) {
    validate(cfg);

    // Field separator that cannot occur inside CSV text fields keeps the
    // concatenation injective.
    std::string material;
    for (const auto& f : identifier_fields) {
        material += f;
        material += '\x1f';
    }
    std::string salt = "linelist-anon:" + cfg.batch_salt;

    // Keyed by appending the secret to the passphrase; scrypt has no
    // separate key input.
    std::string pass = material + '\x1e' + cfg.secret_key;

    unsigned char digest[32];
    if (EVP_PBE_scrypt(pass.data(), pass.size(),
                       reinterpret_cast<const unsigned char*>(salt.data()),
                       salt.size(), cfg.work_factor, cfg.block_size,
                       cfg.parallelism, 0 /* default maxmem */, digest,
                       sizeof(digest)) != 1)
        throw std::runtime_error("scrypt key derivation failed");

    static const char* hex = "0123456789abcdef";
    std::string id;
    for (unsigned char b : digest) {
        id += hex[b >> 4];
        id += hex[b & 0xF];
        if (id.size() >= cfg.id_length) break;
    }
    id.resize(cfg.id_length);
    return id;
}

std::string pseudonymize(const RawRecord& record, const ColumnMapping& mapping,
                         const AnonConfig& cfg) {
    std::vector<std::string> fields;
    for (std::size_t i = 0; i < mapping.entries.size() && i < record.cells.size(); ++i) {
        Role role = mapping.entries[i].role;
        if (role == Role::Name || role == Role::Contact)
            fields.push_back(record.cells[i]);
    }
    // No identifier columns at all: fall back to the whole original row so
    // ids still distinguish records.
    if (fields.empty()) fields = record.cells;
    return pseudonymize_fields(fields, cfg);
}

}  // namespace linelist::anon

#include "comem/affiliation.hpp"

#include <algorithm>
#include <cctype>
#include <istream>
#include <set>
#include <unordered_set>

#include <json.hpp>

#include "comem/csv.hpp"
#include "comem/errors.hpp"

namespace comem {

namespace {

std::string ascii_lower(std::string s) {
    for (char &c : s) {
        c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
    }
    return s;
}

nlohmann::json parse_json_array(std::istream &in, const std::string &what) {
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error &e) {
        throw DataError(what + ": invalid JSON: " + e.what());
    }
    if (!j.is_array()) {
        throw DataError(what + ": expected a JSON array");
    }
    return j;
}

std::string require_string(const nlohmann::json &obj, const char *key, const std::string &where) {
    if (!obj.contains(key) || !obj[key].is_string()) {
        throw DataError(where + ": missing or non-string '" + key + "'");
    }
    return obj[key].get<std::string>();
}

GroupRecord group_from_json(const nlohmann::json &obj, std::size_t index) {
    const std::string where = "groups record " + std::to_string(index);
    if (!obj.is_object()) {
        throw DataError(where + ": expected an object");
    }
    GroupRecord rec;
    rec.id = require_string(obj, "id", where);
    rec.name = require_string(obj, "name", where);
    if (rec.id.empty()) {
        throw DataError(where + ": empty 'id'");
    }
    if (obj.contains("description")) {
        if (!obj["description"].is_string()) {
            throw DataError(where + ": non-string 'description'");
        }
        rec.description = obj["description"].get<std::string>();
    }
    if (obj.contains("city")) {
        if (!obj["city"].is_string()) {
            throw DataError(where + ": non-string 'city'");
        }
        rec.city = obj["city"].get<std::string>();
    }
    if (obj.contains("visibility")) {
        if (!obj["visibility"].is_string()) {
            throw DataError(where + ": non-string 'visibility'");
        }
        try {
            rec.visibility = visibility_from_string(obj["visibility"].get<std::string>());
        } catch (const std::invalid_argument &e) {
            throw DataError(where + ": " + e.what());
        }
    }
    if (obj.contains("members") && !obj["members"].is_null()) {
        if (!obj["members"].is_number_integer() || obj["members"].get<std::int64_t>() < 0) {
            throw DataError(where + ": 'members' must be a non-negative integer");
        }
        rec.declaredMemberCount = obj["members"].get<std::int64_t>();
    }
    return rec;
}

// Header-driven column lookup; required columns must be present.
struct ColumnMap {
    std::vector<int> positions; // per requested column, -1 if absent
    std::size_t width = 0;
};

ColumnMap map_columns(const csv::Record &header, const std::vector<std::string> &wanted,
                      const std::vector<std::string> &required, const std::string &what) {
    ColumnMap map;
    map.width = header.fields.size();
    for (const auto &name : wanted) {
        int pos = -1;
        for (std::size_t i = 0; i < header.fields.size(); ++i) {
            if (header.fields[i] == name) {
                pos = static_cast<int>(i);
                break;
            }
        }
        map.positions.push_back(pos);
    }
    for (const auto &name : required) {
        bool found = false;
        for (std::size_t i = 0; i < header.fields.size(); ++i) {
            found = found || header.fields[i] == name;
        }
        if (!found) {
            throw DataError(what + ": header is missing column '" + name + "'");
        }
    }
    return map;
}

std::string csv_field(const csv::Record &rec, const ColumnMap &map, std::size_t wantedIndex) {
    const int pos = map.positions[wantedIndex];
    if (pos < 0 || static_cast<std::size_t>(pos) >= rec.fields.size()) {
        return {};
    }
    return rec.fields[static_cast<std::size_t>(pos)];
}

std::vector<GroupRecord> load_groups_csv(std::istream &in) {
    const auto records = csv::read(in);
    if (records.empty()) {
        return {};
    }
    const std::vector<std::string> wanted = {"id",   "name",       "description",
                                             "city", "visibility", "members"};
    const auto map = map_columns(records[0], wanted, {"id", "name"}, "groups");
    std::vector<GroupRecord> out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto &rec = records[r];
        const std::string where = "groups row at line " + std::to_string(rec.line);
        if (rec.fields.size() != map.width) {
            throw DataError(where + ": expected " + std::to_string(map.width) + " fields, got " +
                            std::to_string(rec.fields.size()));
        }
        GroupRecord g;
        g.id = csv_field(rec, map, 0);
        g.name = csv_field(rec, map, 1);
        g.description = csv_field(rec, map, 2);
        g.city = csv_field(rec, map, 3);
        if (g.id.empty()) {
            throw DataError(where + ": empty 'id'");
        }
        if (g.name.empty()) {
            throw DataError(where + ": empty 'name'");
        }
        const std::string vis = csv_field(rec, map, 4);
        if (!vis.empty()) {
            try {
                g.visibility = visibility_from_string(vis);
            } catch (const std::invalid_argument &e) {
                throw DataError(where + ": " + e.what());
            }
        }
        const std::string members = csv_field(rec, map, 5);
        if (!members.empty()) {
            try {
                std::size_t used = 0;
                const long long value = std::stoll(members, &used);
                if (used != members.size() || value < 0) {
                    throw std::invalid_argument("bad count");
                }
                g.declaredMemberCount = value;
            } catch (const std::exception &) {
                throw DataError(where + ": 'members' must be a non-negative integer");
            }
        }
        out.push_back(std::move(g));
    }
    return out;
}

std::vector<MembershipRecord> load_memberships_csv(std::istream &in) {
    const auto records = csv::read(in);
    if (records.empty()) {
        return {};
    }
    const std::vector<std::string> wanted = {"user_id", "group_id"};
    const auto map = map_columns(records[0], wanted, wanted, "memberships");
    std::vector<MembershipRecord> out;
    for (std::size_t r = 1; r < records.size(); ++r) {
        const auto &rec = records[r];
        const std::string where = "memberships row at line " + std::to_string(rec.line);
        if (rec.fields.size() != map.width) {
            throw DataError(where + ": expected " + std::to_string(map.width) + " fields, got " +
                            std::to_string(rec.fields.size()));
        }
        MembershipRecord m{csv_field(rec, map, 0), csv_field(rec, map, 1)};
        if (m.userId.empty()) {
            throw DataError(where + ": empty 'user_id'");
        }
        if (m.groupId.empty()) {
            throw DataError(where + ": empty 'group_id'");
        }
        out.push_back(std::move(m));
    }
    return out;
}

} // namespace

std::string to_string(Visibility v) {
    return v == Visibility::Public ? "public" : "private";
}

Visibility visibility_from_string(const std::string &s) {
    const std::string low = ascii_lower(s);
    if (low == "public") {
        return Visibility::Public;
    }
    if (low == "private") {
        return Visibility::Private;
    }
    throw std::invalid_argument("visibility must be \"public\" or \"private\", got \"" + s + "\"");
}

std::vector<GroupRecord> load_groups(std::istream &in, InputFormat format) {
    std::vector<GroupRecord> out;
    if (format == InputFormat::Json) {
        const auto j = parse_json_array(in, "groups");
        out.reserve(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) {
            out.push_back(group_from_json(j[i], i));
        }
    } else {
        out = load_groups_csv(in);
    }
    std::unordered_set<std::string> seen;
    for (const auto &g : out) {
        if (!seen.insert(g.id).second) {
            throw DataError("duplicate group id \"" + g.id + "\"");
        }
    }
    std::sort(out.begin(), out.end(),
              [](const GroupRecord &a, const GroupRecord &b) { return a.id < b.id; });
    return out;
}

std::vector<MembershipRecord> load_memberships(std::istream &in, InputFormat format) {
    std::vector<MembershipRecord> out;
    if (format == InputFormat::Json) {
        const auto j = parse_json_array(in, "memberships");
        out.reserve(j.size());
        for (std::size_t i = 0; i < j.size(); ++i) {
            const std::string where = "memberships record " + std::to_string(i);
            if (!j[i].is_object()) {
                throw DataError(where + ": expected an object");
            }
            MembershipRecord m{require_string(j[i], "user_id", where),
                               require_string(j[i], "group_id", where)};
            if (m.userId.empty()) {
                throw DataError(where + ": empty 'user_id'");
            }
            if (m.groupId.empty()) {
                throw DataError(where + ": empty 'group_id'");
            }
            out.push_back(std::move(m));
        }
    } else {
        out = load_memberships_csv(in);
    }
    std::sort(out.begin(), out.end());
    out.erase(std::unique(out.begin(), out.end()), out.end());
    return out;
}

AffiliationDataset::AffiliationDataset(std::vector<GroupRecord> groups,
                                       std::vector<MembershipRecord> memberships)
    : groups_(std::move(groups)), memberships_(std::move(memberships)) {
    std::sort(groups_.begin(), groups_.end(),
              [](const GroupRecord &a, const GroupRecord &b) { return a.id < b.id; });
    for (std::size_t i = 0; i < groups_.size(); ++i) {
        if (groups_[i].id.empty()) {
            throw DataError("dataset: empty group id");
        }
        if (i > 0 && groups_[i].id == groups_[i - 1].id) {
            throw DataError("duplicate group id \"" + groups_[i].id + "\"");
        }
        members_.emplace(groups_[i].id, std::vector<std::string>{});
    }
    std::sort(memberships_.begin(), memberships_.end());
    memberships_.erase(std::unique(memberships_.begin(), memberships_.end()),
                       memberships_.end());
    for (const auto &m : memberships_) {
        auto it = members_.find(m.groupId);
        if (it == members_.end()) {
            throw DataError("membership references unknown group \"" + m.groupId + "\"");
        }
        it->second.push_back(m.userId);
    }
    for (auto &[id, users] : members_) {
        std::sort(users.begin(), users.end());
    }
}

const GroupRecord *AffiliationDataset::findGroup(const std::string &groupId) const {
    auto it = std::lower_bound(
        groups_.begin(), groups_.end(), groupId,
        [](const GroupRecord &g, const std::string &id) { return g.id < id; });
    if (it == groups_.end() || it->id != groupId) {
        return nullptr;
    }
    return &*it;
}

const std::vector<std::string> &AffiliationDataset::membersOf(const std::string &groupId) const {
    auto it = members_.find(groupId);
    if (it == members_.end()) {
        throw DataError("unknown group \"" + groupId + "\"");
    }
    return it->second;
}

std::size_t AffiliationDataset::userCount() const {
    std::unordered_set<std::string> users;
    users.reserve(memberships_.size());
    for (const auto &m : memberships_) {
        users.insert(m.userId);
    }
    return users.size();
}

AffiliationDataset filter_dataset(const AffiliationDataset &ds, const FilterOptions &options) {
    const std::optional<std::string> wantedCity =
        options.city ? std::optional<std::string>(ascii_lower(*options.city)) : std::nullopt;

    std::vector<GroupRecord> kept;
    std::unordered_set<std::string> keptIds;
    for (const auto &g : ds.groups()) {
        if (wantedCity && ascii_lower(g.city) != *wantedCity) {
            continue;
        }
        if (options.publicOnly && g.visibility != Visibility::Public) {
            continue;
        }
        if (static_cast<std::int64_t>(ds.membersOf(g.id).size()) < options.minMembers) {
            continue;
        }
        kept.push_back(g);
        keptIds.insert(g.id);
    }

    std::vector<MembershipRecord> memberships;
    for (const auto &m : ds.memberships()) {
        if (keptIds.count(m.groupId)) {
            memberships.push_back(m);
        }
    }
    return AffiliationDataset(std::move(kept), std::move(memberships));
}

} // namespace comem

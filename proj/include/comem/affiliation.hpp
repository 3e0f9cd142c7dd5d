#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

namespace comem {

enum class Visibility { Public, Private };
enum class InputFormat { Json, Csv };

struct GroupRecord {
    std::string id;
    std::string name;
    std::string description;
    std::string city;
    Visibility visibility = Visibility::Public;
    std::optional<std::int64_t> declaredMemberCount;
};

struct MembershipRecord {
    std::string userId;
    std::string groupId;

    friend bool operator==(const MembershipRecord &, const MembershipRecord &) = default;
    friend auto operator<=>(const MembershipRecord &, const MembershipRecord &) = default;
};

/// Validated user-group affiliation structure. Groups are kept sorted by id,
/// memberships deduplicated and sorted by (group, user). Every membership
/// must reference a known group.
class AffiliationDataset {
public:
    AffiliationDataset() = default;
    AffiliationDataset(std::vector<GroupRecord> groups, std::vector<MembershipRecord> memberships);

    const std::vector<GroupRecord> &groups() const { return groups_; }
    const std::vector<MembershipRecord> &memberships() const { return memberships_; }

    const GroupRecord *findGroup(const std::string &groupId) const;

    /// Sorted user ids of one group; throws DataError for unknown ids.
    const std::vector<std::string> &membersOf(const std::string &groupId) const;

    std::size_t groupCount() const { return groups_.size(); }
    std::size_t membershipCount() const { return memberships_.size(); }
    std::size_t userCount() const;

private:
    std::vector<GroupRecord> groups_;
    std::vector<MembershipRecord> memberships_;
    std::unordered_map<std::string, std::vector<std::string>> members_;
};

/// Parses group records in the declared format and rejects duplicate ids.
/// Result is sorted by group id.
std::vector<GroupRecord> load_groups(std::istream &in, InputFormat format);

/// Parses membership rows in the declared format; exact duplicates merge
/// silently. Result is sorted and unique.
std::vector<MembershipRecord> load_memberships(std::istream &in, InputFormat format);

struct FilterOptions {
    std::optional<std::string> city; // case-insensitive exact match when set
    bool publicOnly = false;
    std::int64_t minMembers = 0;
};

/// Drops groups failing any enabled predicate, along with their memberships.
AffiliationDataset filter_dataset(const AffiliationDataset &ds, const FilterOptions &options);

std::string to_string(Visibility v);
Visibility visibility_from_string(const std::string &s);

} // namespace comem

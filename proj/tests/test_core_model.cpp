#include <doctest.h>

#include <set>

#include "wavesel/core_model.hpp"
#include "wavesel/errors.hpp"

using namespace wavesel;

TEST_CASE("numerology parameters follow the scaling law") {
    const NumerologyParams mu0 = numerology_params(0);
    CHECK(mu0.scs_hz == doctest::Approx(15000.0));
    CHECK(mu0.t_sym_s == doctest::Approx(66.6666666667e-6).epsilon(1e-12));
    CHECK(mu0.t_cp_s == doctest::Approx(4.6875e-6).epsilon(1e-12));

    const NumerologyParams mu3 = numerology_params(3);
    CHECK(mu3.scs_hz == doctest::Approx(120000.0));
    CHECK(mu3.t_sym_s == doctest::Approx(8.33333333333e-6).epsilon(1e-12));
    CHECK(mu3.t_cp_s == doctest::Approx(0.5859375e-6).epsilon(1e-12));

    CHECK_THROWS_AS(numerology_params(4), DomainError);
    CHECK_THROWS_AS(numerology_params(-1), DomainError);
}

TEST_CASE("subcarrier spacing doubles with each index") {
    for (int mu = 0; mu < 3; ++mu) {
        CHECK(numerology_params(mu + 1).scs_hz ==
              doctest::Approx(2.0 * numerology_params(mu).scs_hz).epsilon(1e-15));
    }
}

TEST_CASE("CP overhead ratio is identical for every numerology") {
    const NumerologyParams ref = numerology_params(0);
    const double ref_ratio = ref.t_cp_s / (ref.t_sym_s + ref.t_cp_s);
    for (int mu = 1; mu < kNumNumerologies; ++mu) {
        const NumerologyParams p = numerology_params(mu);
        const double ratio = p.t_cp_s / (p.t_sym_s + p.t_cp_s);
        CHECK(std::abs(ratio - ref_ratio) < 1e-12);
    }
}

TEST_CASE("class table layout") {
    const ClassTable table = class_table();

    CHECK(table.entries.size() == 10);

    const WaveformClass& first = table.entries[0];
    CHECK(first.label == 1);
    CHECK(first.num_count == 4);
    CHECK(first.guard.id == GuardId::G1);

    const WaveformClass& last = table.entries[9];
    CHECK(last.label == 10);
    CHECK(last.num_count == 1);
    CHECK(last.guard.id == GuardId::NONE);
    CHECK(last.guard.guard_sc15 == 0);

    // Partition: three entries per count in {2,3,4}, one single-numerology.
    std::array<int, 5> per_count{};
    std::set<int> labels;
    for (const WaveformClass& c : table.entries) {
        ++per_count[static_cast<std::size_t>(c.num_count)];
        labels.insert(c.label);
    }
    CHECK(per_count[1] == 1);
    CHECK(per_count[2] == 3);
    CHECK(per_count[3] == 3);
    CHECK(per_count[4] == 3);
    CHECK(labels.size() == 10);
    CHECK(*labels.begin() == 1);
    CHECK(*labels.rbegin() == 10);

    // Labels ascend with guard width inside each count block.
    for (int base = 0; base < 9; base += 3) {
        CHECK(table.entries[static_cast<std::size_t>(base)].guard.guard_sc15 <
              table.entries[static_cast<std::size_t>(base + 1)].guard.guard_sc15);
        CHECK(table.entries[static_cast<std::size_t>(base + 1)].guard.guard_sc15 <
              table.entries[static_cast<std::size_t>(base + 2)].guard.guard_sc15);
    }
}

TEST_CASE("default guard widths") {
    const ClassTable table = class_table();
    CHECK(table.by_label(1).guard.guard_sc15 == 0);
    CHECK(table.by_label(2).guard.guard_sc15 == 4);
    CHECK(table.by_label(3).guard.guard_sc15 == 8);
    CHECK(table.by_label(3).guard.width_hz() == doctest::Approx(120000.0));
}

TEST_CASE("group_of under the default grouping") {
    const ClassGrouping grouping = default_grouping();
    CHECK(group_of(2, grouping) == 1);
    CHECK(group_of(7, grouping) == 3);
    CHECK(group_of(10, grouping) == 4);
    CHECK_THROWS_AS(group_of(0, grouping), DomainError);
    CHECK_THROWS_AS(group_of(11, grouping), DomainError);

    // Total surjection onto {1,2,3,4}.
    std::set<int> groups;
    for (int label = 1; label <= 10; ++label) {
        const int g = group_of(label, grouping);
        CHECK(g >= 1);
        CHECK(g <= 4);
        groups.insert(g);
    }
    CHECK(groups.size() == 4);
}

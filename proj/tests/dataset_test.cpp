#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

#include "lsf/dataset.hpp"

namespace lsf {
namespace {

TEST(Dataset, SphereRandomIsUnitAndSpread) {
    const Dataset data = generate_dataset({100, 128, DatasetKind::sphere_random, 0.7, 1, 2, 2, 0, 3});
    ASSERT_EQ(data.base.size(), 100u);
    EXPECT_TRUE(data.queries.empty());
    double mean = 0.0;
    for (std::size_t i = 0; i < 100; ++i) {
        EXPECT_NEAR(euclidean_norm(data.base[i]), 1.0, 1e-12);
        for (std::size_t j = i + 1; j < 100; ++j) mean += std::abs(inner_product(data.base[i], data.base[j]));
    }
    mean /= 4950;
    EXPECT_LT(mean, 3.0 / std::sqrt(128.0));
}

TEST(Dataset, SpherePlantedSimilarity) {
    const Dataset data = generate_dataset({1000, 64, DatasetKind::sphere_planted, 0.65, 1, 2, 2, 40, 5});
    ASSERT_EQ(data.queries.size(), 40u);
    for (std::size_t i = 0; i < 40; ++i) {
        const auto& t = data.truth[i];
        EXPECT_EQ(t.query_id, i);
        EXPECT_EQ(t.answer_id, i * 25);
        EXPECT_NEAR(inner_product(data.queries[i], data.base[t.answer_id]), 0.65, 1e-9);
        EXPECT_NEAR(t.distance, 0.65, 1e-9);
        EXPECT_NEAR(euclidean_norm(data.base[t.answer_id]), 1.0, 1e-12);
    }
    const Dataset again = generate_dataset({1000, 64, DatasetKind::sphere_planted, 0.65, 1, 2, 2, 40, 5});
    EXPECT_EQ(again.base, data.base);
    EXPECT_EQ(again.truth, data.truth);
}

TEST(Dataset, LsPlantedGuarantee) {
    for (double s : {1.0, 2.0}) {
        const Dataset data = generate_dataset({500, 8, DatasetKind::ls_planted, 0.7, 1.5, 2, s, 25, 6});
        for (std::size_t i = 0; i < data.queries.size(); ++i) {
            const auto hits = linear_scan(data.base, data.queries[i], 3.0, Metric::ls, s);
            ASSERT_EQ(hits.size(), 1u) << s << ' ' << i;
            EXPECT_EQ(hits[0].id, data.truth[i].answer_id);
            EXPECT_NEAR(hits[0].distance, 1.5, 1e-9);
            EXPECT_NEAR(data.truth[i].distance, 1.5, 1e-9);
        }
    }
}

TEST(Dataset, Validation) {
    DatasetSpec bad{10, 4, DatasetKind::sphere_planted, 1.5};
    EXPECT_THROW(generate_dataset(bad), std::invalid_argument);
    EXPECT_THROW(parse_dataset_kind("cube"), std::invalid_argument);
    EXPECT_EQ(parse_dataset_kind(to_string(DatasetKind::ls_planted)), DatasetKind::ls_planted);
}

TEST(Dataset, FvecsAndTextRoundTrip) {
    const Dataset data = generate_dataset({20, 5, DatasetKind::sphere_random, 0.7, 1, 2, 2, 0, 1});
    std::stringstream bin;
    write_fvecs(bin, data.base);
    const auto back = read_fvecs(bin);
    ASSERT_EQ(back.size(), 20u);
    for (std::size_t i = 0; i < 20; ++i) {
        for (std::size_t j = 0; j < 5; ++j) EXPECT_EQ(back[i][j], static_cast<float>(data.base[i][j]));
    }
    std::stringstream txt;
    write_txt(txt, data.base);
    EXPECT_EQ(read_txt(txt), data.base);

    const auto dir = std::filesystem::temp_directory_path();
    write_vectors_file((dir / "lsf_ds.fvecs").string(), data.base, "fvecs");
    write_vectors_file((dir / "lsf_ds.txt").string(), data.base, "txt");
    EXPECT_EQ(read_vectors_file((dir / "lsf_ds.fvecs").string()), back);
    EXPECT_EQ(read_vectors_file((dir / "lsf_ds.txt").string()), data.base);
    std::filesystem::remove(dir / "lsf_ds.fvecs");
    std::filesystem::remove(dir / "lsf_ds.txt");

    std::stringstream ragged("1 2 3\n4 5\n");
    EXPECT_THROW(read_txt(ragged), std::runtime_error);
}

TEST(Dataset, GroundTruthCsvRoundTrip) {
    const std::vector<GroundTruth> truth{{0, 5, 0.25}, {1, 17, 1.0 / 3.0}};
    std::stringstream ss;
    write_ground_truth_csv(ss, truth);
    EXPECT_EQ(parse_ground_truth_csv(ss), truth);
}

TEST(Dataset, LinearScanOrderingAndEdges) {
    const std::vector<Vector> pts{{1, 0}, {0, 1}, {0.6, 0.8}, {1, 0}};
    const Vector q{1, 0};
    const auto ip = linear_scan(pts, q, 0.5, Metric::inner_product);
    ASSERT_EQ(ip.size(), 3u);
    EXPECT_EQ(ip[0].id, 0u);
    EXPECT_EQ(ip[1].id, 3u);
    EXPECT_EQ(ip[2].id, 2u);
    EXPECT_TRUE(linear_scan(pts, q, 1.5, Metric::inner_product).empty());
    EXPECT_TRUE(linear_scan({}, q, 0.0, Metric::ls).empty());
    const auto l1 = linear_scan(pts, q, 1.25, Metric::ls, 1.0);
    ASSERT_EQ(l1.size(), 3u);
    EXPECT_NEAR(l1[2].distance, 1.2, 1e-12);
    EXPECT_EQ(linear_scan(pts, q, 1.25, Metric::ls, 1.0, Execution::parallel), l1);
}

}  // namespace
}  // namespace lsf

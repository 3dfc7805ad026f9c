// Apache License, Version 2.0, refer to LICENSE.txt

#include "rolemine/corpus.hpp"

#include <fstream>

#include <gtest/gtest.h>

#include "rolemine/civil.hpp"
#include "rolemine/rng.hpp"
#include "test_support.hpp"

using namespace rolemine;

namespace {

std::filesystem::path write_lines(const std::filesystem::path& dir,
                                  const std::string& name,
                                  const std::vector<std::string>& lines) {
  const auto path = dir / name;
  std::ofstream out(path);
  for (const auto& line : lines) out << line << "\n";
  return path;
}

const std::string kValidLine =
    R"({"post_id":"p1","account_id":"a1","timestamp":100,"text":"hi","links":["https://x.com/1"],"likes":1,"shares":0,"comments":2})";

}  // namespace

TEST(LoadCorpus, ReadsValidLines) {
  const auto dir = testutil::fresh_temp_dir("corpus_valid");
  const auto path = write_lines(
      dir, "c.jsonl",
      {R"({"post_id":"p1","account_id":"a1","timestamp":10,"text":"one","links":[]})",
       R"({"post_id":"p2","account_id":"a1","timestamp":20,"text":"two","links":["https://x.com"],"extra":"ignored"})",
       R"({"post_id":"p3","account_id":"a2","timestamp":30})"});
  const LoadResult result = load_corpus(path);
  ASSERT_EQ(result.posts.size(), 3u);
  EXPECT_EQ(result.report.loaded, 3u);
  EXPECT_EQ(result.report.skipped(), 0u);
  EXPECT_EQ(result.posts[0].post_id, "p1");
  EXPECT_EQ(result.posts[1].links.size(), 1u);
  EXPECT_EQ(result.posts[2].text, "");
}

TEST(LoadCorpus, SkipsMalformedLinesAndCounts) {
  const auto dir = testutil::fresh_temp_dir("corpus_malformed");
  const auto path = write_lines(
      dir, "c.jsonl",
      {kValidLine, "this is not json",
       R"({"post_id":"p2","account_id":"a2","timestamp":200})"});
  const LoadResult result = load_corpus(path);
  EXPECT_EQ(result.posts.size(), 2u);
  EXPECT_EQ(result.report.skipped_parse, 1u);
  EXPECT_EQ(result.report.skipped(), 1u);
}

TEST(LoadCorpus, EmptyFile) {
  const auto dir = testutil::fresh_temp_dir("corpus_empty");
  const auto path = write_lines(dir, "c.jsonl", {});
  const LoadResult result = load_corpus(path);
  EXPECT_TRUE(result.posts.empty());
  EXPECT_EQ(result.report.skipped(), 0u);
}

TEST(LoadCorpus, RejectsInvalidRecords) {
  const auto dir = testutil::fresh_temp_dir("corpus_invalid");
  const auto path = write_lines(
      dir, "c.jsonl",
      {R"({"post_id":"p1","account_id":"a1","timestamp":-5})",
       R"({"post_id":"p2","account_id":"a2","timestamp":1,"likes":-3})",
       R"({"account_id":"a3","timestamp":1})", kValidLine,
       kValidLine});  // duplicate post_id
  const LoadResult result = load_corpus(path);
  EXPECT_EQ(result.posts.size(), 1u);
  EXPECT_EQ(result.report.skipped_invalid, 3u);
  EXPECT_EQ(result.report.skipped_duplicate, 1u);
}

TEST(LoadCorpus, UnreadableFileThrows) {
  EXPECT_THROW(load_corpus("/nonexistent/corpus.jsonl"), std::runtime_error);
}

TEST(ClassifyLink, BareDomainAndSubdomains) {
  DomainRegistry registry;
  registry.add("vdare.com", SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://www.vdare.com/articles/x", registry),
            SourceType::kExtremist);
  EXPECT_EQ(classify_link("http://VDARE.com", registry), SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://blog.vdare.com/a", registry),
            SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://notvdare.com/a", registry), SourceType::kOther);
}

TEST(ClassifyLink, PathPrefixEntries) {
  DomainRegistry registry;
  registry.add("sites.google.com/site/newblackliberationinstitute",
               SourceType::kExtremist);
  EXPECT_EQ(classify_link(
                "https://sites.google.com/site/newblackliberationinstitute/p",
                registry),
            SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://sites.google.com/site/newblackliberationinstitute",
                          registry),
            SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://sites.google.com/site/other", registry),
            SourceType::kOther);
  EXPECT_EQ(
      classify_link("https://sites.google.com/site/newblackliberationinstituteX",
                    registry),
      SourceType::kOther);
}

TEST(ClassifyLink, LongestPatternWins) {
  DomainRegistry registry;
  registry.add("example.com", SourceType::kBiased);
  registry.add("news.example.com", SourceType::kFakeNews);
  EXPECT_EQ(classify_link("https://news.example.com/a", registry),
            SourceType::kFakeNews);
  EXPECT_EQ(classify_link("https://example.com/a", registry), SourceType::kBiased);
}

TEST(ClassifyLink, NoMatchAndUnparseable) {
  DomainRegistry registry;
  registry.add("vdare.com", SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://example.org/a", registry), SourceType::kOther);
  const auto detail = registry.classify_detail("   ");
  EXPECT_EQ(detail.type, SourceType::kOther);
  EXPECT_FALSE(detail.parsed);
}

TEST(ClassifyLink, PureAndDeterministic) {
  DomainRegistry registry;
  registry.add("vdare.com", SourceType::kExtremist);
  registry.add("rt.com", SourceType::kFakeNews);
  const char* urls[] = {"https://www.vdare.com/a", "http://RT.com/b?x=1",
                        "https://blog.vdare.com", "https://example.org/c", ""};
  for (const char* url : urls) {
    const SourceType first = classify_link(url, registry);
    for (int repeat = 0; repeat < 3; ++repeat)
      EXPECT_EQ(classify_link(url, registry), first) << url;
  }
}

TEST(ClassifyLink, PortAndQueryStripped) {
  DomainRegistry registry;
  registry.add("vdare.com", SourceType::kExtremist);
  EXPECT_EQ(classify_link("https://vdare.com:8080/x?q=1#frag", registry),
            SourceType::kExtremist);
}

TEST(DomainRegistry, DuplicatePatternThrows) {
  DomainRegistry registry;
  registry.add("vdare.com", SourceType::kExtremist);
  EXPECT_THROW(registry.add("www.vdare.com", SourceType::kBiased),
               std::invalid_argument);
}

TEST(DomainRegistry, LoadsTsvFile) {
  const auto dir = testutil::fresh_temp_dir("registry");
  const auto path = write_lines(dir, "r.tsv",
                                {"# comment", "vdare.com\textremist",
                                 "dailywire.com\tbiased", "rt.com\tfake",
                                 "cbn.com\tconspiracy"});
  const DomainRegistry registry = DomainRegistry::load(path);
  EXPECT_EQ(registry.size(), 4u);
  EXPECT_EQ(classify_link("https://rt.com/x", registry), SourceType::kFakeNews);
}

namespace {

PostRecord post(const std::string& id, const std::string& account,
                std::int64_t ts, std::vector<std::string> links = {}) {
  PostRecord p;
  p.post_id = id;
  p.account_id = account;
  p.timestamp = ts;
  p.links = std::move(links);
  return p;
}

WindowSpec jan2018_windows() {
  WindowSpec spec;
  spec.start = *parse_utc_timestamp("2018-01-01");
  spec.window_months = 6;
  spec.window_count = 4;
  return spec;
}

}  // namespace

TEST(SliceWindows, HalfOpenBoundaries) {
  const WindowSpec spec = jan2018_windows();
  DomainRegistry registry;
  const std::int64_t w1_start = *parse_utc_timestamp("2018-07-01");
  const std::vector<PostRecord> posts = {
      post("p0", "a", spec.start),           // exactly window-0 begin
      post("p1", "a", w1_start),             // exactly window-1 begin
      post("p2", "a", w1_start - 1),         // last second of window 0
      post("p3", "a", spec.start - 1),       // before all windows
      post("p4", "a", *parse_utc_timestamp("2020-01-01")),  // after all windows
  };
  const SliceResult slices = slice_windows(posts, spec, registry);
  EXPECT_EQ(slices.assigned, 3u);
  EXPECT_EQ(slices.dropped, 2u);
  EXPECT_EQ(slices.activities.at({"a", 0}).posts.size(), 2u);
  EXPECT_EQ(slices.activities.at({"a", 1}).posts.size(), 1u);
}

TEST(SliceWindows, PartitionProperty) {
  const WindowSpec spec = jan2018_windows();
  DomainRegistry registry;
  registry.add("ex.com", SourceType::kExtremist);
  Rng rng(7);
  std::vector<PostRecord> posts;
  for (int i = 0; i < 500; ++i) {
    const std::int64_t ts =
        spec.start - 5000000 +
        static_cast<std::int64_t>(rng.next_double() * 80000000.0);
    std::vector<std::string> links;
    if (rng.next_double() < 0.5) links.push_back("https://ex.com/" + std::to_string(i));
    posts.push_back(post("p" + std::to_string(i),
                         "a" + std::to_string(rng.next_index(20)), ts, links));
  }
  const SliceResult slices = slice_windows(posts, spec, registry);
  EXPECT_EQ(slices.assigned + slices.dropped, posts.size());
  std::size_t in_activities = 0;
  for (const auto& [key, activity] : slices.activities) {
    in_activities += activity.posts.size();
    // Sub-list containment.
    EXPECT_LE(activity.extremist_link_posts.size(), activity.link_posts.size());
    EXPECT_LE(activity.link_posts.size(), activity.posts.size());
  }
  EXPECT_EQ(in_activities, slices.assigned);
}

TEST(AccountThreshold, UniqueLinkCounting) {
  const WindowSpec spec = jan2018_windows();
  DomainRegistry registry;
  registry.add("ex.com", SourceType::kExtremist);
  std::vector<PostRecord> posts;
  // Account "keep": 10 unique extremist URLs.
  for (int i = 0; i < 10; ++i)
    posts.push_back(post("k" + std::to_string(i), "keep", spec.start + i,
                         {"https://ex.com/" + std::to_string(i)}));
  // Account "drop": 9 unique + 5 duplicate posts of the same URLs.
  for (int i = 0; i < 9; ++i)
    posts.push_back(post("d" + std::to_string(i), "drop", spec.start + i,
                         {"https://ex.com/d" + std::to_string(i)}));
  for (int i = 0; i < 5; ++i)
    posts.push_back(post("dup" + std::to_string(i), "drop", spec.start + 100 + i,
                         {"https://ex.com/d0"}));
  const SliceResult slices = slice_windows(posts, spec, registry);
  const auto retained = apply_account_threshold(slices, posts, registry, 10);
  EXPECT_TRUE(retained.count("keep"));
  EXPECT_FALSE(retained.count("drop"));

  const auto retained_at_1 = apply_account_threshold(slices, posts, registry, 1);
  EXPECT_TRUE(retained_at_1.count("drop"));
}

TEST(AccountThreshold, MonotoneAndAdditionsAreSetDifference) {
  const WindowSpec spec = jan2018_windows();
  DomainRegistry registry;
  registry.add("ex.com", SourceType::kExtremist);
  Rng rng(13);
  std::vector<PostRecord> posts;
  for (int a = 0; a < 30; ++a) {
    const int unique = static_cast<int>(rng.next_index(15));
    for (int i = 0; i < unique; ++i)
      posts.push_back(post("p" + std::to_string(a * 100 + i),
                           "acct" + std::to_string(a), spec.start + i,
                           {"https://ex.com/" + std::to_string(a) + "/" +
                            std::to_string(i)}));
  }
  const SliceResult slices = slice_windows(posts, spec, registry);
  for (std::size_t high = 2; high <= 12; high += 2) {
    const auto strict = apply_account_threshold(slices, posts, registry, high);
    const auto loose = apply_account_threshold(slices, posts, registry, high - 1);
    for (const auto& account : strict) EXPECT_TRUE(loose.count(account));
    const auto added =
        threshold_additions(slices, posts, registry, high, high - 1);
    EXPECT_EQ(added.size(), loose.size() - strict.size());
    for (const auto& account : added) {
      EXPECT_TRUE(loose.count(account));
      EXPECT_FALSE(strict.count(account));
    }
  }
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile_cutoff({1, 2, 3, 4, 5}, 50), 3.0);
  EXPECT_DOUBLE_EQ(percentile_cutoff({0, 10}, 25), 2.5);
  EXPECT_DOUBLE_EQ(percentile_cutoff({7}, 95), 7.0);
  EXPECT_DOUBLE_EQ(percentile_cutoff({5, 1, 3}, 0), 1.0);
  EXPECT_DOUBLE_EQ(percentile_cutoff({5, 1, 3}, 100), 5.0);
  EXPECT_THROW(percentile_cutoff({}, 50), std::invalid_argument);
  EXPECT_THROW(percentile_cutoff({1.0}, 101), std::invalid_argument);
}

TEST(Windows, CalendarMonthArithmetic) {
  // Jan 31 plus one month clamps to Feb 28 in a non-leap year.
  const std::int64_t jan31 = *parse_utc_timestamp("2018-01-31T12:00:00");
  EXPECT_EQ(add_months_utc(jan31, 1), *parse_utc_timestamp("2018-02-28T12:00:00"));
  const WindowSpec spec = jan2018_windows();
  EXPECT_EQ(spec.window_begin(1), *parse_utc_timestamp("2018-07-01"));
  EXPECT_EQ(spec.window_end(3), *parse_utc_timestamp("2020-01-01"));
}

#include "madd/synthetic_scenario.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <random>
#include <span>
#include <string_view>

#include "madd/rng.hpp"

namespace madd {

std::vector<CommunityStats> reference_communities() {
  return {
      {"Entertainment", 113, 24.05, 21.54, 32.63, 21.54, 10.95, 7.87},
      {"Technology", 112, 14.38, 13.09, 11.35, 4.31, 6.08, 3.30},
      {"Sports", 104, 31.70, 24.25, 24.72, 12.95, 11.42, 7.53},
      {"Business", 101, 34.17, 21.17, 36.64, 14.59, 4.82, 2.62},
      {"Politics", 102, 36.01, 28.96, 48.23, 31.65, 23.51, 12.85},
      {"Education", 96, 23.96, 15.65, 14.03, 6.25, 8.03, 2.15},
  };
}

PowerLawFit reference_share_law() {
  PowerLawFit law;
  law.alpha = 1.146;
  law.lambda = 0.006;
  law.x_min = 16;
  law.c = normalization_constant(law.alpha, law.x_min);
  return law;
}

namespace {

struct TopicText {
  std::string_view name;
  std::array<std::string_view, 8> vocabulary;
  std::string_view disinformation;
  std::string_view fact_correction;
  std::string_view narrative_correction;
};

// All items are invented for testing; none describes a real event.
constexpr std::array<TopicText, 6> kTopics{{
    {"Entertainment",
     {"premiere", "soundtrack", "sequel", "streaming", "casting", "festival", "album", "trailer"},
     "BREAKING!!! A leaked memo shows every streaming service will wipe ALL purchased movies "
     "from user libraries next month. Nobody will get a refund. Share before it disappears!",
     "According to the published terms of service of the three largest streaming platforms, "
     "purchased titles stay in user libraries. No company statement or official filing mentions "
     "any deletion plan, and the memo has no traceable source.",
     "My sister bought forty films on her streaming account over ten years. Last night we "
     "watched the first one she ever bought, still sitting in her library like always. Nothing "
     "vanished, and her account looks the same as it did last year."},
    {"Technology",
     {"firmware", "battery", "chip", "update", "app", "router", "cloud", "privacy"},
     "URGENT: the new phone update secretly turns on your microphone 24 hours a day and sends "
     "every conversation to advertisers. Engineers have confirmed it. Uninstall NOW!",
     "Independent security researchers published a teardown of the update this week. Their "
     "data shows no new microphone permission and no extra network traffic, and the vendor's "
     "official changelog lists only battery and camera fixes.",
     "I work the night shift next to a guy who repairs phones for a living. He installed the "
     "update on his own phone, left it on his desk through a long quiet evening, and watched the "
     "network monitor sit idle the whole time. He still uses it to call his kids."},
    {"Sports",
     {"playoffs", "coach", "transfer", "stadium", "season", "league", "striker", "referee"},
     "SHOCKING!! The championship final was fixed months ago. Every referee was paid 2 million "
     "to guarantee the result. Insiders say the league covered it all up!",
     "The league's official match records and the independent integrity unit's report both "
     "show no betting anomalies for the final, and statistics from the referee assessment "
     "panel rate all four officials within normal range.",
     "My uncle has refereed amateur matches for thirty years and knows two of the officials "
     "from that final. He sat with them at a small dinner afterward; they argued about one "
     "offside call for an hour and went home tired, the way he always does after a hard game."},
    {"Business",
     {"earnings", "merger", "startup", "shares", "market", "retail", "supply", "quarter"},
     "ALERT: the largest national bank will freeze all savings accounts on Friday. Withdraw "
     "every cent today before it is too late! Thousands are already lining up!",
     "The central bank and the deposit insurance agency issued official statements denying "
     "any freeze. According to the bank's latest quarterly report, its reserves are well above "
     "the legal minimum, and data from branch networks shows normal withdrawal volumes.",
     "This morning I walked into my local branch to deposit my paycheck. The teller, who has "
     "known my family since I opened my first account, laughed at the rumor and told me "
     "about her own daughter's savings sitting there safely. There was no line at all."},
    {"Politics",
     {"election", "senate", "ballot", "policy", "campaign", "debate", "reform", "vote"},
     "EXPOSED!!! Thousands of ballots in the capital were printed with invisible ink that "
     "erases the vote after 48 hours. Officials KNOW and are hiding it!",
     "The election commission's published audit compared every paper ballot with the scanner "
     "records; the counts matched. Chemists consulted for an independent study found no ink "
     "that could fade, and the source of the claim is an anonymous account created last week.",
     "My grandmother volunteered as a poll worker in the capital. She described unfolding the "
     "same ballots at the recount days later, every mark still dark and clear, while observers "
     "from both parties watched over her shoulder and signed off together."},
    {"Education",
     {"exam", "curriculum", "campus", "tuition", "teacher", "scholarship", "degree", "lecture"},
     "BREAKING!! All national university entrance exams are CANCELLED this year and places "
     "will be assigned by lottery. Every student must register within 3 days!",
     "The ministry of education's official calendar still lists the exam dates, and its "
     "press office confirmed them in a statement on Monday. No lottery registration portal "
     "exists on any government domain, according to the national exam board.",
     "My neighbour teaches final-year students. Yesterday she handed out the practice papers "
     "for the entrance exam, the same ones her class uses every spring, and spent the "
     "afternoon helping a nervous boy plan his revision schedule."},
}};

constexpr std::array<std::string_view, 8> kGenericVocabulary{
    "news", "community", "update", "event", "group", "story", "discussion", "topic"};

const TopicText* find_topic(std::string_view name) {
  for (const auto& t : kTopics)
    if (t.name == name) return &t;
  return nullptr;
}

// Lognormal with the given mean and standard deviation, rounded to a count.
// Activity counts are right-skewed, so a lognormal fits the reported moments
// better than a symmetric law.
std::int64_t skewed_count(Substream& rng, double mean, double sd) {
  if (mean <= 0) return 0;
  if (sd <= 0) return std::llround(mean);
  const double sigma2 = std::log1p((sd / mean) * (sd / mean));
  std::lognormal_distribution<double> dist(std::log(mean) - 0.5 * sigma2, std::sqrt(sigma2));
  return std::llround(dist(rng));
}

// Largest-remainder split of `total` in proportion to `weights`.
std::vector<int> apportion(int total, const std::vector<int>& weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<int> out(weights.size(), 0);
  if (sum <= 0 || weights.empty()) return out;
  std::vector<std::pair<double, std::size_t>> remainders;
  int assigned = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = total * weights[i] / sum;
    out[i] = static_cast<int>(std::floor(exact));
    assigned += out[i];
    remainders.emplace_back(exact - out[i], i);
  }
  std::stable_sort(remainders.begin(), remainders.end(),
                   [](const auto& a, const auto& b) { return a.first > b.first; });
  for (int k = 0; k < total - assigned; ++k) ++out[remainders[static_cast<std::size_t>(k)].second];
  return out;
}

std::string make_text(Substream& rng, std::span<const std::string_view> vocab, TextKind kind) {
  static constexpr std::array<std::string_view, 6> kFrames{
      "Thoughts on the latest {} news?",      "Can't stop talking about the {} today",
      "Great thread about {} and more",       "Anyone following the {} story?",
      "New {} details just dropped",          "Long day, but the {} was worth it"};
  std::uniform_int_distribution<std::size_t> pick_frame(0, kFrames.size() - 1);
  std::uniform_int_distribution<std::size_t> pick_word(0, vocab.size() - 1);
  std::string frame(kFrames[pick_frame(rng)]);
  frame.replace(frame.find("{}"), 2, vocab[pick_word(rng)]);
  switch (kind) {
    case TextKind::retweet: return "RT " + frame;
    case TextKind::quote: return "So true. " + frame;
    case TextKind::post: break;
  }
  return frame;
}

// Activity mass concentrated around a per-user peak hour on top of a flat floor.
std::vector<std::int64_t> diurnal_histogram(Substream& rng, std::int64_t events) {
  std::vector<std::int64_t> hist(kHoursPerDay, 0);
  std::normal_distribution<double> peak_dist(20.0, 3.0);
  const double peak = peak_dist(rng);
  std::normal_distribution<double> around(peak, 2.5);
  std::uniform_int_distribution<int> flat(0, kHoursPerDay - 1);
  const std::int64_t n = std::max<std::int64_t>(events, 1);
  for (std::int64_t i = 0; i < n; ++i) {
    int hour = 0;
    if (rng.bernoulli(0.7)) {
      hour = static_cast<int>(std::floor(around(rng)));
      hour = ((hour % kHoursPerDay) + kHoursPerDay) % kHoursPerDay;
    } else {
      hour = flat(rng);
    }
    ++hist[static_cast<std::size_t>(hour)];
  }
  return hist;
}

}  // namespace

Scenario make_synthetic_scenario(const SyntheticScenarioOptions& options) {
  const auto stats = options.communities.empty() ? reference_communities() : options.communities;
  std::vector<int> weights;
  for (const auto& c : stats) weights.push_back(c.users);
  const auto counts = apportion(options.total_users, weights);

  Scenario s;
  s.params.rng_seed = options.seed;
  s.power_law = options.share_law;
  for (const auto& c : stats) s.communities.push_back(c.name);

  const double tail = 1.0 / (options.follower_exponent - 1.0);
  for (std::size_t j = 0; j < stats.size(); ++j) {
    const auto& c = stats[j];
    const TopicText* topic = find_topic(c.name);
    std::span<const std::string_view> vocab =
        topic ? std::span<const std::string_view>(topic->vocabulary)
              : std::span<const std::string_view>(kGenericVocabulary);
    for (int k = 0; k < counts[j]; ++k) {
      Substream rng{options.seed, fnv1a64("synthetic-user"), j, static_cast<std::uint64_t>(k)};
      UserRecord u;
      u.user_id = c.name.substr(0, 3) + "_" + std::to_string(k);
      std::transform(u.user_id.begin(), u.user_id.end(), u.user_id.begin(),
                     [](unsigned char ch) { return static_cast<char>(std::tolower(ch)); });
      const double v = 1.0 - rng.uniform();  // (0, 1]
      u.follower_count = static_cast<std::int64_t>(
          std::floor(static_cast<double>(options.follower_min) * std::pow(v, -tail)));
      u.following_count = skewed_count(rng, 300, 200);
      u.post_count = skewed_count(rng, c.post_mean, c.post_sd);
      u.retweet_count = skewed_count(rng, c.retweet_mean, c.retweet_sd);
      u.quote_count = skewed_count(rng, c.quote_mean, c.quote_sd);
      u.description = "Interested in " + c.name + ", especially " + std::string(vocab[0]) +
                      " and " + std::string(vocab[1]) + ".";
      const std::array<TextKind, 3> kinds{TextKind::post, TextKind::retweet, TextKind::quote};
      for (int i = 0; i < options.texts_per_user; ++i) {
        const TextKind kind = kinds[static_cast<std::size_t>(i) % kinds.size()];
        u.historical_texts.push_back({kind, make_text(rng, vocab, kind)});
      }
      u.activity_histogram =
          diurnal_histogram(rng, u.post_count + u.retweet_count + u.quote_count);
      u.source_community = c.name;
      s.users.push_back(std::move(u));
    }

    const std::string prefix = c.name.substr(0, 3);
    if (topic) {
      s.content_catalog.push_back({prefix + "-d1", c.name, ContentKind::disinformation,
                                   Strategy::none, std::string(topic->disinformation),
                                   std::nullopt});
      s.content_catalog.push_back({prefix + "-f1", c.name, ContentKind::correction,
                                   Strategy::fact_based, std::string(topic->fact_correction),
                                   std::nullopt});
      s.content_catalog.push_back({prefix + "-n1", c.name, ContentKind::correction,
                                   Strategy::narrative_based,
                                   std::string(topic->narrative_correction), std::nullopt});
    } else {
      s.content_catalog.push_back(
          {prefix + "-d1", c.name, ContentKind::disinformation, Strategy::none,
           "SHOCKING!!! Everyone in " + c.name + " is being lied to. ALL of it is fake!",
           std::nullopt});
      s.content_catalog.push_back(
          {prefix + "-f1", c.name, ContentKind::correction, Strategy::fact_based,
           "According to official records and published data, the viral claim about " + c.name +
               " has no supporting source.",
           std::nullopt});
      s.content_catalog.push_back(
          {prefix + "-n1", c.name, ContentKind::correction, Strategy::narrative_based,
           "A friend who has spent years in " + c.name +
               " told me how the rumor started at a party and grew with every retelling.",
           std::nullopt});
    }
  }
  return s;
}

}  // namespace madd

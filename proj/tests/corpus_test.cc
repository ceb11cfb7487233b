// Copyright 2026 The SLID Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "slid/corpus/charset.h"
#include "slid/corpus/labeling.h"
#include "slid/corpus/manifest.h"
#include "slid/corpus/segmenter.h"
#include "slid/corpus/split.h"
#include "slid/corpus/synth.h"
#include "slid/corpus/text_lid.h"
#include "slid/error.h"
#include "slid/features/feature_cache.h"
#include "slid/features/wav.h"
#include "slid/utf8.h"
#include "test_util.h"

namespace slid::corpus {
namespace {

using ::slid::testing::MakeTempDir;
using ::slid::testing::ReadText;
using ::slid::testing::WriteText;

void WriteSilence(const std::filesystem::path& path, double seconds) {
  std::vector<double> wave(static_cast<std::size_t>(seconds * 16000), 0.0);
  features::WriteWav(path, wave, 16000);
}

Song MakeSong(const std::string& id, double duration,
              std::vector<Word> words = {}) {
  Song song;
  song.id = id;
  song.artist_id = "artist";
  song.language = "xx";
  song.duration = duration;
  song.words = std::move(words);
  return song;
}

// ---------------------------------------------------------------- manifest

TEST(ManifestTest, LoadsTwoSongs) {
  const auto dir = MakeTempDir("m");
  WriteSilence(dir / "a.wav", 2.0);
  WriteSilence(dir / "b.wav", 3.0);
  WriteText(dir / "manifest.tsv",
            "s1\tart1\ten\ta.wav\thelo|0.1|0.5;wɜld|0.6|1.2\n"
            "s2\tart2\tfr\tb.wav\t\n");
  const Corpus corpus = LoadManifest(dir / "manifest.tsv");
  ASSERT_EQ(corpus.songs.size(), 2u);
  EXPECT_EQ(corpus.songs[0].id, "s1");
  EXPECT_EQ(corpus.songs[0].artist_id, "art1");
  EXPECT_EQ(corpus.songs[0].language, "en");
  EXPECT_DOUBLE_EQ(corpus.songs[0].duration, 2.0);
  ASSERT_EQ(corpus.songs[0].words.size(), 2u);
  EXPECT_EQ(corpus.songs[0].words[1].ipa, "wɜld");
  EXPECT_DOUBLE_EQ(corpus.songs[0].words[1].start, 0.6);
  EXPECT_TRUE(corpus.songs[1].words.empty());
  EXPECT_TRUE(corpus.warnings.empty());
}

TEST(ManifestTest, DuplicateIdIsRejected) {
  const auto dir = MakeTempDir("m");
  WriteSilence(dir / "a.wav", 1.0);
  WriteText(dir / "manifest.tsv",
            "s1\tart1\ten\ta.wav\t\n"
            "s1\tart2\ten\ta.wav\t\n");
  try {
    LoadManifest(dir / "manifest.tsv");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kDuplicateId);
    EXPECT_NE(std::string(e.what()).find("duplicate id"), std::string::npos);
  }
}

TEST(ManifestTest, EmptyManifestWarns) {
  const auto dir = MakeTempDir("m");
  WriteText(dir / "manifest.tsv", "");
  const Corpus corpus = LoadManifest(dir / "manifest.tsv");
  EXPECT_TRUE(corpus.songs.empty());
  EXPECT_EQ(corpus.warnings.size(), 1u);
}

TEST(ManifestTest, ParseErrorNamesLine) {
  const auto dir = MakeTempDir("m");
  WriteSilence(dir / "a.wav", 1.0);
  WriteText(dir / "manifest.tsv",
            "s1\tart1\ten\ta.wav\t\n"
            "s2\tart1\ten\ta.wav\tbad-word-entry\n");
  try {
    LoadManifest(dir / "manifest.tsv");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kParse);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(ManifestTest, MissingFileNamesSong) {
  const auto dir = MakeTempDir("m");
  WriteText(dir / "manifest.tsv", "lost_song\tart1\ten\tnope.wav\t\n");
  try {
    LoadManifest(dir / "manifest.tsv");
    FAIL() << "expected an error";
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kMissingFile);
    EXPECT_NE(std::string(e.what()).find("lost_song"), std::string::npos);
  }
}

TEST(ManifestTest, WordBeyondAudioIsRejected) {
  const auto dir = MakeTempDir("m");
  WriteSilence(dir / "a.wav", 1.0);
  WriteText(dir / "manifest.tsv", "s1\tart1\ten\ta.wav\tla|0.5|1.5\n");
  EXPECT_THROW(LoadManifest(dir / "manifest.tsv"), Error);
}

TEST(ManifestTest, WriteThenLoadRoundTrips) {
  const auto dir = MakeTempDir("m");
  WriteSilence(dir / "a.wav", 2.0);
  Corpus corpus;
  Song song = MakeSong("s1", 2.0, {{"ʃa", 0.25, 0.5}, {"mi", 1.0, 1.75}});
  song.source = dir / "a.wav";
  corpus.songs.push_back(song);
  WriteManifest(dir / "manifest.tsv", corpus);
  const Corpus loaded = LoadManifest(dir / "manifest.tsv");
  ASSERT_EQ(loaded.songs.size(), 1u);
  EXPECT_EQ(loaded.songs[0].words, song.words);
  EXPECT_EQ(std::filesystem::canonical(loaded.songs[0].source),
            std::filesystem::canonical(song.source));
}

// --------------------------------------------------------------- segmenter

std::vector<double> Starts(const std::vector<Segment>& segs) {
  std::vector<double> out;
  for (const auto& s : segs) out.push_back(s.start);
  return out;
}

TEST(SegmenterTest, SixtySecondSongGivesFiveSegments) {
  const auto segs = SegmentSong(MakeSong("s", 60.0), {});
  EXPECT_EQ(Starts(segs), (std::vector<double>{0, 10, 20, 30, 40}));
  for (const auto& s : segs) EXPECT_DOUBLE_EQ(s.length(), 20.0);
}

TEST(SegmenterTest, TwentySecondSongGivesOneSegment) {
  const auto segs = SegmentSong(MakeSong("s", 20.0), {});
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_DOUBLE_EQ(segs[0].start, 0.0);
  EXPECT_DOUBLE_EQ(segs[0].end, 20.0);
}

TEST(SegmenterTest, ThirtyFiveSecondSongAddsEndAlignedSegment) {
  const auto segs = SegmentSong(MakeSong("s", 35.0), {});
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_DOUBLE_EQ(segs[0].start, 0.0);
  EXPECT_DOUBLE_EQ(segs[1].start, 10.0);
  EXPECT_DOUBLE_EQ(segs[2].start, 15.0);
  EXPECT_DOUBLE_EQ(segs[2].end, 35.0);
}

TEST(SegmenterTest, TwentyFiveSecondSongEndsAligned) {
  const auto segs = SegmentSong(MakeSong("s", 25.0), {});
  EXPECT_EQ(Starts(segs), (std::vector<double>{0, 5}));
}

TEST(SegmenterTest, ExactHopMultipleAddsNoExtraSegment) {
  const auto segs = SegmentSong(MakeSong("s", 50.0), {});
  EXPECT_EQ(Starts(segs), (std::vector<double>{0, 10, 20, 30}));
}

TEST(SegmenterTest, ShortSongGivesOneWholeSegment) {
  const auto segs = SegmentSong(MakeSong("s", 7.5), {});
  ASSERT_EQ(segs.size(), 1u);
  EXPECT_DOUBLE_EQ(segs[0].start, 0.0);
  EXPECT_DOUBLE_EQ(segs[0].end, 7.5);
}

TEST(SegmenterTest, WordsAssignedByMidpoint) {
  // Midpoints 9.5, 19.9, 20.1, 29.0.
  const Song song = MakeSong(
      "s", 40.0,
      {{"a", 9.0, 10.0}, {"b", 19.8, 20.0}, {"c", 20.0, 20.2}, {"d", 28, 30}});
  const auto segs = SegmentSong(song, {});
  ASSERT_EQ(segs.size(), 3u);
  EXPECT_EQ(segs[0].words, (std::vector<std::string>{"a", "b"}));
  EXPECT_EQ(segs[1].words, (std::vector<std::string>{"b", "c", "d"}));
  EXPECT_EQ(segs[2].words, (std::vector<std::string>{"c", "d"}));
}

TEST(SegmenterTest, EveryWordIsCovered) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> dur(1.0, 95.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double duration = dur(rng);
    std::vector<Word> words;
    for (double t = 0.0; t + 0.4 <= duration; t += 0.7) {
      words.push_back({"w" + std::to_string(words.size()), t, t + 0.4});
    }
    const auto segs = SegmentSong(MakeSong("s", duration, words), {});
    std::set<std::string> covered;
    for (const auto& s : segs) covered.insert(s.words.begin(), s.words.end());
    for (const auto& w : words) {
      EXPECT_TRUE(covered.count(w.ipa)) << w.ipa << " duration " << duration;
    }
    for (const auto& s : segs) {
      if (duration >= 20.0) {
        EXPECT_NEAR(s.length(), 20.0, 1e-9);
      }
    }
  }
}

// ---------------------------------------------------------------- text LID

// Independent add-one n-gram scorer: each text is padded with one space on
// each side, n = 1..3, shared vocabulary over all training n-grams.
std::vector<std::u32string> Grams(const std::string& text) {
  std::u32string padded = U" ";
  for (char32_t c : DecodeUtf8(text)) padded.push_back(c);
  padded.push_back(U' ');
  std::vector<std::u32string> out;
  for (std::size_t n = 1; n <= 3; ++n) {
    for (std::size_t i = 0; i + n <= padded.size(); ++i) {
      out.push_back(padded.substr(i, n));
    }
  }
  return out;
}

TEST(TextLidTest, TwoSentencePosteriorMatchesHandComputation) {
  const NgramTextLid lid =
      NgramTextLid::Train({{"the cat", "en"}, {"le chat", "fr"}});
  std::map<std::string, std::map<std::u32string, double>> counts;
  std::map<std::string, double> totals;
  std::set<std::u32string> vocab;
  for (const auto& [text, lang] : std::vector<std::pair<std::string, std::string>>{
           {"the cat", "en"}, {"le chat", "fr"}}) {
    for (const auto& g : Grams(text)) {
      counts[lang][g] += 1;
      totals[lang] += 1;
      vocab.insert(g);
    }
  }
  // " the cat " has 9 unigrams, 8 bigrams, 7 trigrams.
  EXPECT_EQ(totals["en"], 24.0);
  EXPECT_EQ(totals["fr"], 24.0);
  std::map<std::string, double> loglik;
  for (const auto& g : Grams("the dog")) {
    for (const std::string lang : {"en", "fr"}) {
      loglik[lang] += std::log((counts[lang][g] + 1.0) /
                               (totals[lang] + static_cast<double>(vocab.size())));
    }
  }
  const double p_en =
      1.0 / (1.0 + std::exp(loglik["fr"] - loglik["en"]));
  const LidPrediction pred = lid.Predict("the dog");
  EXPECT_EQ(pred.language, "en");
  EXPECT_GT(pred.confidence, 0.5);
  EXPECT_NEAR(pred.confidence, p_en, 1e-12);
}

TEST(TextLidTest, EmptyTextIsUnknown) {
  const NgramTextLid lid =
      NgramTextLid::Train({{"the cat", "en"}, {"le chat", "fr"}});
  const LidPrediction pred = lid.Predict("");
  EXPECT_EQ(pred.language, "unknown");
  EXPECT_EQ(pred.confidence, 0.0);
}

TEST(TextLidTest, TrainingSentenceGetsItsOwnLabel) {
  const NgramTextLid lid = NgramTextLid::Train(
      {{"the cat sat on the mat", "en"}, {"le chat est sur le tapis", "fr"},
       {"el gato esta en la alfombra", "es"}});
  EXPECT_EQ(lid.Predict("le chat est sur le tapis").language, "fr");
  EXPECT_EQ(lid.Predict("the cat sat on the mat").language, "en");
  EXPECT_EQ(lid.Predict("el gato esta en la alfombra").language, "es");
}

TEST(TextLidTest, EmptyTrainingSetIsRejected) {
  EXPECT_THROW(NgramTextLid::Train({}), Error);
}

// ---------------------------------------------------------------- labeling

NgramTextLid EnglishFrenchLid() {
  return NgramTextLid::Train({
      {"the sun is shining over the quiet town and the river flows", "en"},
      {"we walk along the road while the night is falling down", "en"},
      {"she sings a song about the love that never fades away", "en"},
      {"le soleil brille sur la ville tranquille et la riviere coule", "fr"},
      {"nous marchons sur la route pendant que la nuit tombe", "fr"},
      {"elle chante une chanson sur un amour qui ne meurt jamais", "fr"},
  });
}

TEST(LabelingTest, TwoWordsAreInstrumental) {
  const auto lid = EnglishFrenchLid();
  const std::vector<std::string> words = {"hello", "world"};
  EXPECT_EQ(LabelSegment(words, lid, {}).kind, SegmentKind::kInstrumental);
}

TEST(LabelingTest, RepetitiveLyricsAreAmbiguous) {
  const auto lid = EnglishFrenchLid();
  const std::vector<std::string> words(6, "la");
  EXPECT_NEAR(DistinctWordRatio(words), 1.0 / 6.0, 1e-12);
  EXPECT_EQ(LabelSegment(words, lid, {}).kind, SegmentKind::kAmbiguous);
}

TEST(LabelingTest, ConfidentEnglishIsEnglish) {
  const auto lid = EnglishFrenchLid();
  const std::vector<std::string> words = {"the", "night", "is", "quiet",
                                          "and", "the", "road", "is", "long"};
  const LidPrediction pred = lid.Predict(JoinWords(words));
  EXPECT_EQ(pred.language, "en");
  EXPECT_GE(pred.confidence, 0.5);
  const SegmentLabel label = LabelSegment(words, lid, {});
  EXPECT_EQ(label, (SegmentLabel{SegmentKind::kLanguage, "en"}));
}

TEST(LabelingTest, LowConfidenceIsAmbiguous) {
  const auto lid = EnglishFrenchLid();
  LabelingConfig config;
  config.confidence_threshold = 1.0;
  const std::vector<std::string> words = {"la", "route", "the", "road"};
  EXPECT_EQ(LabelSegment(words, lid, config).kind, SegmentKind::kAmbiguous);
}

TEST(LabelingTest, IsPureFunctionOfInputs) {
  const auto lid = EnglishFrenchLid();
  const std::vector<std::string> words = {"nous", "marchons", "sur", "la",
                                          "route"};
  const SegmentLabel a = LabelSegment(words, lid, {});
  const SegmentLabel b = LabelSegment(words, lid, {});
  EXPECT_EQ(a, b);
  EXPECT_EQ(a.language, "fr");
}

// ----------------------------------------------------------------- charset

TEST(CharsetTest, TwoPhonemesGiveFiveTokens) {
  Segment seg;
  seg.words = {"ab", "ba"};
  const Charset cs = Charset::Build(std::vector<Segment>{seg});
  EXPECT_EQ(cs.size(), 5u);
  EXPECT_EQ(cs.tokens(),
            (std::vector<std::string>{kBlankToken, " ", "I", "a", "b"}));
  EXPECT_EQ(cs.blank_id(), 0);
  EXPECT_EQ(cs.space_id(), 1);
  EXPECT_EQ(cs.instrumental_id(), 2);
}

TEST(CharsetTest, PhonemesOrderedByCodepoint) {
  Segment a, b;
  a.words = {"ʃo"};
  b.words = {"ɑk"};
  const Charset cs = Charset::Build(std::vector<Segment>{a, b});
  // k (U+006B) < o (U+006F) < ɑ (U+0251) < ʃ (U+0283).
  EXPECT_EQ(cs.tokens(), (std::vector<std::string>{kBlankToken, " ", "I", "k",
                                                   "o", "ɑ", "ʃ"}));
  EXPECT_EQ(Charset::Build(std::vector<Segment>{b, a}).tokens(), cs.tokens());
}

TEST(CharsetTest, EmptySegmentSetIsRejected) {
  EXPECT_THROW(Charset::Build(std::vector<Segment>{}), Error);
}

TEST(CharsetTest, EncodeJoinsWordsAndCountsDroppedPhonemes) {
  Segment seg;
  seg.words = {"ab"};
  const Charset cs = Charset::Build(std::vector<Segment>{seg});
  int dropped = 0;
  const std::vector<std::string> words = {"ab", "bza"};
  EXPECT_EQ(cs.Encode(words, &dropped), (PhonemeSeq{3, 4, 1, 4, 3}));
  EXPECT_EQ(dropped, 1);
  EXPECT_EQ(cs.Encode(std::vector<std::string>{}), (PhonemeSeq{2}));
  EXPECT_EQ(cs.CountWords(PhonemeSeq{3, 4, 1, 4, 3, 1, 1, 3}), 3);
}

// ------------------------------------------------------------------- split

std::vector<Song> ArtistSongs(const std::string& lang, int artists,
                              int songs_per_artist) {
  std::vector<Song> out;
  for (int a = 0; a < artists; ++a) {
    for (int s = 0; s < songs_per_artist; ++s) {
      Song song = MakeSong(lang + "_" + std::to_string(a) + "_" +
                               std::to_string(s),
                           30.0);
      song.language = lang;
      song.artist_id = lang + "_artist" + std::to_string(a);
      out.push_back(song);
    }
  }
  return out;
}

TEST(SplitTest, TenSingleSongArtistsSplitEightOneOne) {
  const auto songs = ArtistSongs("en", 10, 1);
  const CorpusSplit split = SplitCorpus(songs, {0.8, 0.1, 0.1, 42});
  EXPECT_EQ(split.train.size(), 8u);
  EXPECT_EQ(split.val.size(), 1u);
  EXPECT_EQ(split.test.size(), 1u);
  EXPECT_TRUE(split.warnings.empty());
}

TEST(SplitTest, ArtistSongsStayTogether) {
  auto songs = ArtistSongs("en", 9, 1);
  auto big = ArtistSongs("en", 1, 5);
  for (auto& s : big) {
    s.id = "big_" + s.id;
    s.artist_id = "big_artist";
  }
  songs.insert(songs.end(), big.begin(), big.end());
  const CorpusSplit split = SplitCorpus(songs, {0.8, 0.1, 0.1, 3});
  int buckets_with_big = 0;
  for (const auto* bucket : {&split.train, &split.val, &split.test}) {
    int n = 0;
    for (const auto& s : *bucket) n += s.artist_id == "big_artist";
    if (n > 0) {
      ++buckets_with_big;
      EXPECT_EQ(n, 5);
    }
  }
  EXPECT_EQ(buckets_with_big, 1);
}

TEST(SplitTest, SameSeedGivesIdenticalSplit) {
  auto songs = ArtistSongs("en", 12, 2);
  auto fr = ArtistSongs("fr", 7, 3);
  songs.insert(songs.end(), fr.begin(), fr.end());
  const CorpusSplit a = SplitCorpus(songs, {0.8, 0.1, 0.1, 99});
  const CorpusSplit b = SplitCorpus(songs, {0.8, 0.1, 0.1, 99});
  EXPECT_EQ(a.train, b.train);
  EXPECT_EQ(a.val, b.val);
  EXPECT_EQ(a.test, b.test);
}

TEST(SplitTest, ArtistDisjointAndWithinOneSongForManySeeds) {
  std::mt19937_64 rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<Song> songs;
    std::map<std::string, int> per_language;
    for (const std::string lang : {"aa", "bb", "cc"}) {
      const int artists = 10 + static_cast<int>(rng() % 11);
      for (int a = 0; a < artists; ++a) {
        const int n = 1 + static_cast<int>(rng() % 2);
        for (int s = 0; s < n; ++s) {
          Song song = MakeSong(lang + std::to_string(a) + "_" + std::to_string(s),
                               30.0);
          song.language = lang;
          song.artist_id = lang + "_artist" + std::to_string(a);
          songs.push_back(song);
          ++per_language[lang];
        }
      }
    }
    const CorpusSplit split =
        SplitCorpus(songs, {0.8, 0.1, 0.1, static_cast<std::uint64_t>(trial)});
    std::map<std::string, int> artist_bucket;
    int bucket_index = 0;
    std::size_t total = 0;
    for (const auto* bucket : {&split.train, &split.val, &split.test}) {
      std::map<std::string, int> counts;
      for (const auto& s : *bucket) {
        const auto [it, inserted] =
            artist_bucket.emplace(s.artist_id, bucket_index);
        EXPECT_EQ(it->second, bucket_index) << "artist " << s.artist_id;
        ++counts[s.language];
      }
      const double ratio = bucket_index == 0 ? 0.8 : 0.1;
      for (const auto& [lang, n] : per_language) {
        if (split.warnings.empty()) {
          EXPECT_LE(std::abs(counts[lang] - n * ratio), 1.5)
              << lang << " bucket " << bucket_index;
        }
      }
      total += bucket->size();
      ++bucket_index;
    }
    EXPECT_EQ(total, songs.size());
  }
}

TEST(SplitTest, EmptyCorpusIsRejected) {
  EXPECT_THROW(SplitCorpus({}, {}), Error);
}

// ------------------------------------------------------------------- synth

SynthSpec SmallSpec(std::uint64_t seed) {
  SynthSpec spec;
  spec.alphabet = DefaultSynthAlphabet();
  for (int i = 0; i < 3; ++i) {
    spec.languages.push_back(MakeRandomLanguage(
        "l" + std::to_string(i), spec.alphabet.size(), seed * 31 + i));
  }
  spec.songs_per_language = 4;
  spec.artists_per_language = 2;
  spec.song_duration = 6.0;
  spec.seed = seed;
  return spec;
}

TEST(SynthTest, ProducesBalancedCorpus) {
  const auto dir = MakeTempDir("synth");
  SynthSpec spec = SmallSpec(1);
  const Corpus corpus = GenerateSynth(spec, dir, {});
  ASSERT_EQ(corpus.songs.size(), 12u);
  std::map<std::string, int> per_language;
  for (const auto& s : corpus.songs) ++per_language[s.language];
  for (const auto& [lang, n] : per_language) EXPECT_EQ(n, 4) << lang;
  const Corpus loaded = LoadManifest(dir / "manifest.tsv");
  EXPECT_EQ(loaded.songs.size(), 12u);
  for (const auto& s : loaded.songs) {
    EXPECT_FALSE(s.words.empty());
    for (const auto& w : s.words) EXPECT_LE(w.end, s.duration + 1e-6);
  }
}

TEST(SynthTest, SameSeedIsByteIdentical) {
  const auto a = MakeTempDir("a");
  const auto b = MakeTempDir("b");
  const SynthSpec spec = SmallSpec(2);
  GenerateSynth(spec, a, {});
  GenerateSynth(spec, b, {});
  EXPECT_EQ(ReadText(a / "manifest.tsv"), ReadText(b / "manifest.tsv"));
  for (const auto& entry : std::filesystem::directory_iterator(a)) {
    EXPECT_EQ(ReadText(entry.path()), ReadText(b / entry.path().filename()))
        << entry.path();
  }
}

TEST(SynthTest, WordsMatchRenderedPhonemes) {
  const SynthSpec spec = SmallSpec(3);
  const RenderedSong r = RenderSong(spec, 1, 2);
  std::string concat;
  for (const auto& w : r.song.words) concat += w.ipa;
  std::string rendered;
  for (const auto& span : r.spans) rendered += spec.alphabet[span.phoneme];
  EXPECT_EQ(concat, rendered);
}

TEST(SynthTest, NoiselessPhonemeRecoverableFromDominantFrequency) {
  SynthSpec spec = SmallSpec(4);
  spec.noise_level = 0.0;
  const RenderedSong r = RenderSong(spec, 0, 0);
  ASSERT_FALSE(r.spans.empty());
  const std::size_t k = spec.alphabet.size();
  int checked = 0;
  for (const auto& span : r.spans) {
    // Correlate the span centre against every phoneme's tone pair.
    const std::size_t mid = (span.begin + span.end) / 2;
    const std::size_t half = 1024;
    if (mid < half || mid + half > r.wave.size()) continue;
    std::size_t best = 0;
    double best_power = -1;
    for (std::size_t p = 0; p < k; ++p) {
      const double f = PhonemeFrequency(p, k);
      double power = 0.0;
      for (double factor : {0.98, 1.02}) {
        double re = 0, im = 0;
        for (std::size_t s = mid - half; s < mid + half; ++s) {
          const double w = 2.0 * std::numbers::pi * f * factor * s / spec.sample_rate;
          re += r.wave[s] * std::cos(w);
          im += r.wave[s] * std::sin(w);
        }
        power += re * re + im * im;
      }
      if (power > best_power) {
        best_power = power;
        best = p;
      }
    }
    EXPECT_EQ(best, span.phoneme);
    ++checked;
  }
  EXPECT_GT(checked, 5);
}

TEST(SynthTest, InvalidTransitionMatrixIsRejected) {
  SynthSpec spec = SmallSpec(5);
  spec.languages[0].transitions[0][0] += 0.5;
  EXPECT_THROW(spec.Validate(), Error);
  const auto dir = MakeTempDir("bad");
  EXPECT_THROW(GenerateSynth(spec, dir, {}), Error);
}

}  // namespace
}  // namespace slid::corpus

// Copyright 2026 The petcarbon Authors
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

#include "petcarbon/email/corpus.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <string_view>

#include "petcarbon/common/error.hpp"
#include "petcarbon/common/splitmix.hpp"

namespace petcarbon::email {

namespace fs = std::filesystem;

namespace {

using Mix = SplitMix64;

constexpr std::string_view kPeople[] = {
    "alice.martin", "bob.keller",   "carol.nguyen", "dave.osei",    "erin.larsen",
    "frank.moreau", "grace.kowal",  "heidi.suzuki", "ivan.petrov",  "judy.adams",
    "ken.dubois",   "lena.fischer", "mike.rossi",   "nina.haddad",  "oscar.lima",
    "paula.weber",  "quinn.baker",  "rita.jansen",  "sam.okafor",   "tina.vargas",
    "uma.patel",    "victor.hugo",  "wendy.clark",  "xavier.soto"};

constexpr std::string_view kSubjects[] = {
    "Quarterly forecast",  "Re: contract draft",   "Meeting moved",     "Pipeline capacity",
    "Re: trading limits",  "Budget review",        "Fwd: site visit",   "Invoice question",
    "Re: weekly update",   "Storage agreement",    "Schedule for Monday", "Gas nominations",
    "Re: counterparty list", "Draft memo",         "Travel plans",      "Re: risk report"};

constexpr std::string_view kWords[] = {
    "the",       "and",       "for",        "with",      "this",      "that",       "will",
    "please",    "thanks",    "meeting",    "contract",  "agreement", "pipeline",   "capacity",
    "gas",       "power",     "energy",     "market",    "price",     "trading",    "desk",
    "deal",      "volume",    "schedule",   "monday",    "tuesday",   "friday",     "week",
    "month",     "quarter",   "forecast",   "budget",    "review",    "report",     "draft",
    "memo",      "attached",  "comments",   "changes",   "legal",     "credit",     "risk",
    "limit",     "exposure",  "counterparty", "storage", "transport", "delivery",   "point",
    "north",     "south",     "west",       "east",      "texas",     "houston",    "portland",
    "office",    "team",      "group",      "call",      "conference", "room",      "floor",
    "tomorrow",  "today",     "yesterday",  "morning",   "afternoon", "evening",    "confirm",
    "question",  "answer",    "issue",      "problem",   "solution",  "update",     "status",
    "project",   "plan",      "proposal",   "offer",     "bid",       "invoice",    "payment",
    "account",   "balance",   "margin",     "position",  "hedge",     "option",     "swap",
    "forward",   "spot",      "index",      "basis",     "spread",    "curve",      "model",
    "analysis",  "data",      "system",     "database",  "server",    "access",     "password",
    "regulatory", "filing",   "commission", "tariff",    "rate",      "customer",   "supplier",
    "vendor",    "plant",     "turbine",    "outage",    "maintenance", "operations", "staff",
    "hiring",    "interview", "candidate",  "salary",     "travel",    "flight",     "hotel",
    "dinner",    "lunch",     "coffee",     "weekend",   "family",    "holiday",    "vacation",
    "signed",    "executed",  "pending",    "approved",  "rejected",  "revised",    "final",
    "version",   "copy",      "original",   "fax",       "phone",     "email",      "note",
    "regards",   "best",      "sincerely",  "cheers",    "soon",      "asap",       "later",
    "next",      "last",      "first",      "second",    "third",     "dollars",    "million",
    "thousand",  "percent",   "about"};

std::string sentence(Mix& rng) {
  const std::size_t n = 5 + rng.below(14);
  std::string s;
  for (std::size_t i = 0; i < n; ++i) {
    if (i) s += ' ';
    if (rng.below(12) == 0) {
      s += std::to_string(rng.below(10000));
    } else {
      s += kWords[rng.below(std::size(kWords))];
    }
  }
  s[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(s[0])));
  s += rng.below(6) == 0 ? "?" : ".";
  return s;
}

}  // namespace

std::vector<std::string> generate_synthetic_corpus(std::size_t count, std::uint64_t seed) {
  Mix rng(seed);
  std::vector<std::string> out;
  out.reserve(count);
  for (std::size_t m = 0; m < count; ++m) {
    const auto from = kPeople[rng.below(std::size(kPeople))];
    const auto to = kPeople[rng.below(std::size(kPeople))];
    char date[64];
    std::snprintf(date, sizeof date, "Date: %02zu %s 2001 %02zu:%02zu:00 -0700", 1 + rng.below(28),
                  std::array{"Jan", "Feb", "Mar", "Apr", "May", "Jun", "Jul", "Aug", "Sep", "Oct",
                             "Nov", "Dec"}[rng.below(12)],
                  rng.below(24), rng.below(60));
    std::string msg = "Message-ID: <" + std::to_string(seed % 100000) + "." + std::to_string(m) +
                      "@mail.example.net>\n";
    msg += std::string(date) + "\n";
    msg += "From: " + std::string(from) + "@example.com\n";
    msg += "To: " + std::string(to) + "@example.com\n";
    msg += "Subject: " + std::string(kSubjects[rng.below(std::size(kSubjects))]) + "\n\n";
    // Heavy-tailed length: most messages short, a few long.
    std::size_t paragraphs = 1 + rng.below(3);
    if (rng.below(8) == 0) paragraphs += 4 + rng.below(12);
    for (std::size_t p = 0; p < paragraphs; ++p) {
      const std::size_t sentences = 1 + rng.below(5);
      for (std::size_t s = 0; s < sentences; ++s) {
        if (s) msg += ' ';
        msg += sentence(rng);
      }
      msg += "\n\n";
    }
    msg += std::string(from.substr(0, from.find('.'))) + "\n";
    out.push_back(std::move(msg));
  }
  return out;
}

void write_corpus(const fs::path& dir, const std::vector<std::string>& messages) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::kIoError, dir.string() + ": " + ec.message());
  for (std::size_t i = 0; i < messages.size(); ++i) {
    char name[32];
    std::snprintf(name, sizeof name, "msg_%04zu.txt", i);
    std::ofstream f(dir / name, std::ios::binary);
    f << messages[i];
    if (!f) throw Error(ErrorCode::kIoError, (dir / name).string() + ": write failed");
  }
}

EmailCorpus load_corpus(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) {
    throw Error(ErrorCode::kIoError, dir.string() + ": not a readable directory");
  }
  std::vector<fs::path> files;
  fs::recursive_directory_iterator it(dir, ec), end;
  if (ec) throw Error(ErrorCode::kIoError, dir.string() + ": " + ec.message());
  for (; it != end; it.increment(ec)) {
    if (ec) throw Error(ErrorCode::kIoError, dir.string() + ": " + ec.message());
    if (it->path().filename().string().starts_with(".")) {
      if (it->is_directory()) it.disable_recursion_pending();
      continue;
    }
    if (it->is_regular_file()) files.push_back(it->path());
  }
  std::sort(files.begin(), files.end());

  EmailCorpus corpus;
  corpus.source = dir;
  for (const auto& p : files) {
    std::ifstream f(p, std::ios::binary);
    if (!f) throw Error(ErrorCode::kIoError, p.string() + ": cannot open");
    Bytes data((std::istreambuf_iterator<char>(f)), std::istreambuf_iterator<char>());
    if (f.bad()) throw Error(ErrorCode::kIoError, p.string() + ": read failed");
    if (!data.empty()) corpus.messages.push_back(std::move(data));
  }
  if (corpus.messages.empty()) {
    throw Error(ErrorCode::kEmptyCorpus, dir.string() + ": no non-empty message files");
  }
  return corpus;
}

}  // namespace petcarbon::email

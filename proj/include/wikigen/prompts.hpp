#pragma once

// The generation and evaluation prompt templates, embedded verbatim as
// named resources. `{keyword}`/`{section}` are placeholders; the
// `{documents}` line is replaced by "Document k: ..." entries (and removed
// entirely when no documents are offered).

#include <string>
#include <string_view>

namespace wikigen {
namespace prompts {

inline constexpr std::string_view kArticleGeneration =
    R"(I have a topic "{keyword}" that contains the following documents:
{documents}
Based on the above information, you are assigned to write a Wikipedia article on the topic.
Organize the content of your article by sections. Before writing each section, always starts with "==SECTION NAME==".
You must cite the most relevant document for every sentence you write, in the format of "This is an example sentence.[k]", where k denotes Document k.)";

inline constexpr std::string_view kOutlineGeneration =
    R"(I have a topic "{keyword}" that contains the following documents:
{documents}
Based on the above information, you are assigned to write an outline for a Wikipedia article about this topic.
Your outline should only include the names of the sections, without any further details.
Do not use document name as your outline.
The format of your outline should be as follows:
1. Introduction
2. <Section Name 1>
...
n. <Section Name n>)";

inline constexpr std::string_view kSectionGeneration =
    R"(I have a topic "{keyword}" and a section "{section}" that contains the following documents:
{documents}
Based on the above information, you are assigned to write a Wikipedia article on the topic.
You must cite the most relevant document for every sentence you write, in the format of "This is an example sentence.[k]", where k denotes Document k.)";

inline constexpr std::string_view kFluentInfoEvaluation =
    R"(Evaluate a encyclopedia text of a keyword in three metrics,fluency,informativeness,faithfulness.

Give a score from 0-5 to each metric.

Fluency: Assess the text for grammatical correctness, coherence of ideas, and overall readability. Look for smooth transitions between sentences and paragraphs, as well as clear organization of information.

Informativeness: Evaluate the depth and breadth of information provided about the keyword. Check if the text covers various aspects of the topic, including its definition, background, significance, related concepts, and any relevant examples or applications.

Faithfulness: Verify the accuracy of the information presented in the text by cross-referencing with credible sources or established knowledge,assess whether the information aligns with accepted facts and evidence.

Only give three scores in this form: Fluency:score1,Informativeness:score2 Faithfulness:socre3.No need to Explaination.)";

inline constexpr std::string_view kTitleEvaluation =
    R"(Given a keyword,and a outlines about the wikipedia of the keyword, assign a score ranging from 0 to 5 to evaluate the quality of the outlines.Only give the score without explaination.)";

inline constexpr std::string_view kFocusEvaluation =
    R"(Given a keyword, a subtitle, and corresponding content, assess whether the generated content sufficiently elaborates on the subtitle. Assign a score from 0 to 5 based on the following criteria:
- **Score 5 (Excellent):** The content comprehensively covers the subtitle, providing in-depth information and insights.
- **Score 4 (Good):** The content is thorough, addressing key points of the subtitle effectively.
- **Score 3 (Moderate):** The content provides a decent overview of the subtitle but lacks some essential details.
- **Score 2 (Fair):** The content misses crucial aspects related to the subtitle and needs improvement.
- **Score 1 (Poor):** The content focuses on irrelevant or unimportant aspects, failing to address the subtitle adequately.
- **Score 0 (Unacceptable):** The content is entirely incorrect or meaningless concerning the subtitle.
Only reply the score without explaniation.)";

inline constexpr std::string_view kIbAnswer =
    R"(Given a question and a passage,answer the question only according to the information in the passage,if the passage don't give any information about the question,answer no information.Only give the answer without explanation.)";

inline constexpr std::string_view kIbEquivalence =
    R"(Given a question,a golden answer and a candidate answer,if the candidate answer has the same meaning as the golden answer,reply 1,else 0.Only reply 0 or 1 without explaination)";

}  // namespace prompts

/// Labels used when composing evaluation calls; mocks key off the same
/// strings.
namespace prompt_labels {
inline constexpr std::string_view kKeyword = "Keyword:";
inline constexpr std::string_view kText = "Text:";
inline constexpr std::string_view kOutlines = "Outlines:";
inline constexpr std::string_view kSubtitle = "Subtitle:";
inline constexpr std::string_view kContent = "Content:";
inline constexpr std::string_view kQuestion = "Question:";
inline constexpr std::string_view kPassage = "Passage:";
inline constexpr std::string_view kGolden = "Golden answer:";
inline constexpr std::string_view kCandidate = "Candidate answer:";
}  // namespace prompt_labels

}  // namespace wikigen

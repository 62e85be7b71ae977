#!/usr/bin/env python3
"""Writes schema/fixtures/*.json: request/response pairs for the reward service.

Expected rewards are written down from the reward rules directly (format 0.5
for one <tag> pair followed by one <answer> pair, accuracy 0.5 for a matching
boxed answer, no-prompt mode pays 1.0 for accuracy only), not by running the
service.
"""
import json
import pathlib
import sys

VERSION = "rftkit.reward.v1"
TAGS = {"think": "think", "plan": "plan", "code": "code", "knowledge": "knowledge", "examples": "examples"}


def good(tag, answer):
    return f"<{tag}>work it out</{tag}><answer>so \\boxed{{{answer}}}</answer>"


def reward(acc, fmt):
    return {"accuracy": acc, "format": fmt, "total": acc + fmt}


def score_case(name, approach, items, rewards):
    return {
        "name": name,
        "method": "POST",
        "path": "/v1/score",
        "request": {"approach": approach, "items": items},
        "status": 200,
        "compare": "exact",
        "response": {"version": VERSION, "rewards": rewards},
    }


def error_case(name, path, request, status, code, field=None):
    err = {"code": code}
    if field is not None:
        err["field"] = field
    return {
        "name": name,
        "method": "POST",
        "path": path,
        "request": request,
        "status": status,
        "compare": "error",
        "response": {"version": VERSION, "error": err},
    }


def cases():
    out = []
    out.append(score_case(
        "score_think_mixed", "think",
        [
            {"response": good("think", "\\frac{1}{2}"), "ground_truth": "0.5"},
            {"response": "no tags but \\boxed{0.5}", "ground_truth": "1/2"},
            {"response": good("think", "7"), "ground_truth": "8"},
            {"response": "<answer>\\boxed{3}</answer><think>late</think>", "ground_truth": "3"},
        ],
        [reward(0.5, 0.5), reward(0.5, 0.0), reward(0.0, 0.5), reward(0.5, 0.0)],
    ))
    out.append(score_case(
        "score_none_mode", "none",
        [
            {"response": "The answer is \\boxed{42}.", "ground_truth": "42"},
            {"response": good("think", "42"), "ground_truth": "41"},
            {"response": "nothing boxed", "ground_truth": "1"},
        ],
        [reward(1.0, 0.0), reward(0.0, 0.0), reward(0.0, 0.0)],
    ))
    for approach, tag in TAGS.items():
        out.append(score_case(
            f"score_{approach}_perfect", approach,
            [{"response": good(tag, "2\\sqrt{2}"), "ground_truth": "\\sqrt{8}"}],
            [reward(0.5, 0.5)],
        ))

    # 2050 items cycle through three shapes; clients split this into 1024-item requests
    patterns = [
        (lambda i: good("think", str(i)), lambda i: str(i), reward(0.5, 0.5)),
        (lambda i: good("think", str(i + 1)), lambda i: str(i), reward(0.0, 0.5)),
        (lambda i: f"\\boxed{{{i}}}", lambda i: str(i), reward(0.5, 0.0)),
    ]
    items, rewards = [], []
    for i in range(2050):
        resp, truth, r = patterns[i % 3]
        items.append({"response": resp(i), "ground_truth": truth(i)})
        rewards.append(r)
    chunked = score_case("score_chunked_2050", "think", items, rewards)
    chunked["chunk"] = 1024
    out.append(chunked)

    out.append({
        "name": "format_pass", "method": "POST", "path": "/v1/format",
        "request": {"response": good("plan", "1"), "tag": "plan"},
        "status": 200, "compare": "exact",
        "response": {"version": VERSION, "passed": True, "violations": []},
    })
    out.append({
        "name": "format_order_violation", "method": "POST", "path": "/v1/format",
        "request": {"response": "<answer>1</answer><plan>p</plan>", "tag": "plan"},
        "status": 200, "compare": "exact",
        "response": {"version": VERSION, "passed": False, "violations": ["OrderViolation"]},
    })
    out.append({
        "name": "equivalence_half", "method": "POST", "path": "/v1/equivalence",
        "request": {"a": "0.5", "b": "\\frac{1}{2}"},
        "status": 200, "compare": "exact",
        "response": {"version": VERSION, "equivalent": True, "method": "ExactRational"},
    })
    out.append({
        "name": "equivalence_choice", "method": "POST", "path": "/v1/equivalence",
        "request": {"a": "(b)", "b": "B"},
        "status": 200, "compare": "exact",
        "response": {"version": VERSION, "equivalent": True, "method": "ChoiceMatch"},
    })
    out.append({
        "name": "healthz", "method": "GET", "path": "/healthz", "request": None,
        "status": 200, "compare": "schema",
        "response": {"status": "ok", "version": VERSION},
    })

    out.append(error_case("format_reserved_tag", "/v1/format", {"response": "x", "tag": "answer"}, 400,
                          "schema_violation", "/tag"))
    out.append(error_case("score_empty_items", "/v1/score", {"approach": "think", "items": []}, 400,
                          "schema_violation", "/items"))
    out.append(error_case("score_unknown_approach", "/v1/score",
                          {"approach": "cot", "items": [{"response": "", "ground_truth": "1"}]}, 400,
                          "schema_violation", "/approach"))
    out.append(error_case("score_unknown_item_field", "/v1/score",
                          {"approach": "think", "items": [{"response": "", "ground_truth": "1", "id": 3}]}, 400,
                          "schema_violation", "/items/0/id"))
    out.append(error_case("score_missing_truth", "/v1/score",
                          {"approach": "think", "items": [{"response": ""}]}, 400,
                          "schema_violation", "/items/0/ground_truth"))
    out.append(error_case("score_wrong_version", "/v1/score",
                          {"version": "rftkit.reward.v0", "approach": "think",
                           "items": [{"response": "", "ground_truth": "1"}]}, 400,
                          "schema_violation", "/version"))
    out.append(error_case("score_batch_too_large", "/v1/score",
                          {"approach": "none", "items": [{"response": "", "ground_truth": "1"}] * 1025}, 413,
                          "batch_too_large", "/items"))
    return out


def main():
    root = pathlib.Path(sys.argv[1]) if len(sys.argv) > 1 else pathlib.Path(__file__).resolve().parents[2]
    dest = root / "schema" / "fixtures"
    dest.mkdir(parents=True, exist_ok=True)
    for old in dest.glob("*.json"):
        old.unlink()
    for case in cases():
        (dest / f"{case['name']}.json").write_text(json.dumps(case, indent=1) + "\n")


if __name__ == "__main__":
    main()

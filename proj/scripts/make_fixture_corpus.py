#!/usr/bin/env python3
# Copyright 2026 The pygec Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.
"""Writes tests/data/fixture_utterances.jsonl: 100 template sentences with
labeled entities (people, places, organisations)."""

import json
import os
import random

PEOPLE = ["张伟", "王芳", "李娜", "刘洋", "陈静", "杨帆", "赵磊", "黄敏", "周杰", "吴刚"]
PLACES = ["北京", "上海", "杭州", "成都", "武汉", "南京", "西安", "深圳", "长沙", "青岛"]
ORGS = ["清华大学", "人民医院", "中国银行", "国家电网", "北京大学", "气象局",
        "科学院", "电视台", "博物馆", "图书馆"]
TEMPLATES = [
    ("{p}明天要去{l}参加一个重要的会议", "pl"),
    ("{o}今年在{l}开设了新的分部", "ol"),
    ("我听说{p}已经加入了{o}的研究团队", "po"),
    ("{l}的天气最近变化很大请注意保暖", "l"),
    ("{p}和朋友一起在{l}度过了周末", "pl"),
    ("{o}发布了关于交通安全的最新通知", "o"),
    ("下个月{p}会代表{o}出席这次活动", "po"),
    ("这次比赛的冠军来自{l}的一所中学", "l"),
    ("{p}认为{o}的服务质量还有提高空间", "po"),
    ("请把这份文件尽快送到{l}的{o}", "lo"),
]


def main():
    rng = random.Random(20260101)
    out = os.path.join(os.path.dirname(__file__), "..", "tests", "data",
                       "fixture_utterances.jsonl")
    with open(out, "w", encoding="utf-8") as f:
        for i in range(100):
            tmpl, kinds = TEMPLATES[i % len(TEMPLATES)]
            p, l, o = rng.choice(PEOPLE), rng.choice(PLACES), rng.choice(ORGS)
            ref = tmpl.format(p=p, l=l, o=o)
            ents = [{"p": p, "l": l, "o": o}[k] for k in kinds]
            rec = {"id": f"u{i:03d}", "reference": ref, "entities": ents}
            f.write(json.dumps(rec, ensure_ascii=False) + "\n")


if __name__ == "__main__":
    main()

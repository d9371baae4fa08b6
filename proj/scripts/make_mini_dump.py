#!/usr/bin/env python3
"""Generate fixtures/mini-dump: a small synthetic Stack Exchange community.

Deterministic (fixed seed). Questions are labeled by the pipeline's own
heuristic, so the generator only shapes the comment/edit/answer patterns:
  clear      - accepted answer, no comments, no edits
  unclear    - another user asks a question in a comment, owner responds
  discarded  - anything else (silent owner, no answer, remark without '?')
"""

import datetime
import pathlib
import random
import sys
from xml.sax.saxutils import escape

SEED = 20240611
OUT = pathlib.Path(sys.argv[1] if len(sys.argv) > 1 else "fixtures/mini-dump")

TOPICS = {
    "laptop": {
        "tags": ["laptop", "power-management", "hibernate", "battery", "asus"],
        "things": ["laptop", "battery", "charger", "sleep mode", "hibernate", "power button",
                   "lid", "fan", "touchpad"],
        "symptoms": ["randomly goes to sleep", "does not wake up from hibernate",
                     "drains the battery overnight", "shuts down when unplugged",
                     "gets very hot while idle", "restarts instead of sleeping"],
        "details": ["Asus ROG G751JT", "Dell XPS 13 9360", "Lenovo ThinkPad T480", "HP Envy 15"],
        "clarq": ["Which OS are you using?",
                  "Does this happen if you boot instead from an Ubuntu LiveUSB?",
                  "Did you enable allow wake timers in power options sleep?",
                  "Have you scanned your system for malwares?",
                  "Can you pop the battery out of the mouse?",
                  "Which BIOS version is installed?"],
        "answers": ["Disable wake timers in the advanced power options.",
                    "Update the BIOS and the chipset drivers from the vendor site."],
    },
    "zfs": {
        "tags": ["zfs", "storage", "backup", "ssd", "raid"],
        "things": ["zfs pool", "ssd", "mirror", "snapshot", "scrub", "dataset", "raidz", "arc cache"],
        "symptoms": ["uses too much memory", "is very slow after the upgrade",
                     "shows checksum errors", "cannot be imported anymore",
                     "fills up although files were deleted"],
        "details": ["FreeBSD 12.1 with 16 GB RAM", "Ubuntu 20.04 with zfsutils-linux 0.8.3",
                    "TrueNAS 12 on a Xeon E3", "Proxmox 6.2 with two mirrored disks"],
        "clarq": ["What kind of data are you trying to protect?",
                  "Is SSD large enough?",
                  "How are you planning on doing backups and or disaster recovery?",
                  "What's wrong with more redundancy?",
                  "How much RAM does the machine have?"],
        "answers": ["Limit the ARC size with the zfs_arc_max module parameter.",
                    "Destroy the old snapshots; they still reference the deleted blocks."],
    },
    "xml": {
        "tags": ["xml", "editors", "utf8", "xslt", "windows", "linux"],
        "things": ["xml editor", "xml schema", "xslt transform", "utf8 encoding", "xpath query",
                   "dtd validation"],
        "symptoms": ["breaks the utf8 characters", "is too slow on large files",
                     "does not validate against the schema", "crashes on big documents"],
        "details": ["Notepad++ 7.8 with the XML Tools plugin", "oXygen XML Editor 22",
                    "xmllint from libxml2 2.9.10", "Visual Studio Code 1.50"],
        "clarq": ["What operating system?", "How large are the files?",
                  "Which encoding does the file declare?", "Do you need schema validation?"],
        "answers": ["Use xmllint --noout --schema to validate from the command line.",
                    "Save the file as UTF-8 without BOM and declare the encoding."],
    },
    "emacs": {
        "tags": ["emacs", "elisp", "org-mode", "keybindings"],
        "things": ["emacs", "init file", "org-mode agenda", "keybinding", "package archive",
                   "dired buffer", "tramp connection"],
        "symptoms": ["ignores my configuration", "starts very slowly",
                     "freezes when opening remote files", "loses the keybinding after restart"],
        "details": ["GNU Emacs 26.3 on Debian", "Emacs 27.1 built with native json",
                    "Spacemacs 0.300 on macOS", "Doom Emacs on Arch Linux"],
        "clarq": ["Which Emacs version are you running?", "Does it happen with emacs -Q?",
                  "Can you show the relevant part of your init file?",
                  "Are you using a starter kit like Spacemacs?"],
        "answers": ["Run emacs --debug-init to see where loading fails.",
                    "Bind the key in the mode map instead of the global map."],
    },
    "git": {
        "tags": ["git", "version-control", "github", "merge"],
        "things": ["git rebase", "merge conflict", "remote branch", "commit history", "submodule",
                   "git stash", "pull request"],
        "symptoms": ["lost my changes", "rejects the push", "shows the wrong author",
                     "keeps asking for a password", "creates duplicate commits"],
        "details": ["git 2.25.1 on Ubuntu", "git for Windows 2.28", "GitLab 13.4 server",
                    "a GitHub Enterprise remote"],
        "clarq": ["What does git status show?", "Which git version is this?",
                  "Did you push the branch before rebasing?",
                  "Can you paste the exact error message?"],
        "answers": ["Use git reflog to find the commit and reset the branch to it.",
                    "Configure the credential helper so the token is cached."],
    },
    "wifi": {
        "tags": ["networking", "wifi", "router", "dns", "dhcp"],
        "things": ["wifi adapter", "router", "dns server", "dhcp lease", "ip address",
                   "network driver", "vpn client"],
        "symptoms": ["drops the connection every few minutes", "cannot resolve host names",
                     "gets no ip address", "is much slower than the cable"],
        "details": ["Intel AX200 on Windows 10 2004", "TP-Link Archer C7 with OpenWrt 19.07",
                    "Realtek RTL8821CE on Ubuntu 20.04", "Netgear R7000 firmware 1.0.11"],
        "clarq": ["Which router model do you have?", "Does the cable connection work?",
                  "What does ipconfig /all show?", "Which OS are you using?",
                  "Is the driver up to date?"],
        "answers": ["Disable power saving for the adapter in the device manager.",
                    "Set the dns servers manually in the dhcp options."],
    },
}

VAGUE_OPENERS = ["Since yesterday my {thing} {symptom}.", "My {thing} {symptom}.",
                 "Suddenly the {thing} {symptom}.", "Help, {thing} {symptom}!"]
VAGUE_CLOSERS = ["Any idea?", "How can I fix this?", "What should I do?", "Is this normal?",
                 "Please help."]
OWNER_REPLIES = ["I am on {detail}.", "It is {detail}, sorry for not mentioning it.",
                 "Yes, I tried that already, same result.", "No, it only happens on battery."]
REMARKS = ["Same problem here.", "+1, I see this as well.", "This belongs on a different site.",
           "Possible duplicate of another question."]
CODE = ["$ dmesg | tail\n[  42.1] ACPI: wakeup event\n[  42.9] PM: suspend exit",
        "zpool status -v\n  state: ONLINE\n  errors: No known data errors",
        "&lt;config encoding=\"utf-8\"&gt;\n  &lt;item id=\"1\"/&gt;\n&lt;/config&gt;",
        "(global-set-key (kbd \"C-c a\") 'org-agenda)",
        "git push origin feature\n! [rejected] feature -&gt; feature (non-fast-forward)",
        "ping 8.8.8.8\nRequest timed out."]


class Dump:
    def __init__(self):
        self.posts, self.comments, self.history = [], [], []
        self.next_post = 1
        self.next_comment = 1
        self.next_history = 1
        self.clock = datetime.datetime(2016, 3, 1, 8, 0, 0)

    def tick(self, rng, lo=5, hi=600):
        self.clock += datetime.timedelta(minutes=rng.randint(lo, hi), seconds=rng.randint(0, 59))
        return self.clock.strftime("%Y-%m-%dT%H:%M:%S.") + "%03d" % rng.randint(0, 999)

    def post(self, **attrs):
        attrs["Id"] = self.next_post
        self.next_post += 1
        self.posts.append(attrs)
        return attrs

    def comment(self, post_id, user, text, date):
        row = {"Id": self.next_comment, "PostId": post_id, "Score": 0, "Text": text,
               "CreationDate": date}
        if user is not None:
            row["UserId"] = user
        self.next_comment += 1
        self.comments.append(row)

    def edit(self, post_id, kind, user, date, text):
        row = {"Id": self.next_history, "PostHistoryTypeId": kind, "PostId": post_id,
               "CreationDate": date, "UserId": user, "Text": text}
        self.next_history += 1
        self.history.append(row)


def body_html(paragraphs, code=None, quote=None):
    html = "".join("<p>%s</p>\n" % p for p in paragraphs)
    if quote:
        html += "<blockquote><p>%s</p></blockquote>\n" % quote
    if code:
        html += "<pre><code>%s</code></pre>\n" % code
    return html


def clear_question(rng, topic):
    t = TOPICS[topic]
    thing, symptom, detail = rng.choice(t["things"]), rng.choice(t["symptoms"]), rng.choice(t["details"])
    other = rng.choice([x for x in t["things"] if x != thing])
    title = "%s %s on %s" % (thing.capitalize(), symptom, detail)
    paras = ["I am running %s. After upgrading last week the %s %s, which did not happen before."
             % (detail, thing, symptom),
             "I already checked the %s settings and reinstalled the %s, the behaviour is the same. "
             "The output below shows what happens right before the problem." % (other, thing),
             "How can I find out which component causes this, and how do I make it stop?"]
    code = rng.choice(CODE) if rng.random() < 0.7 else None
    quote = "The documentation says the %s should handle this automatically." % other \
        if rng.random() < 0.25 else None
    return title, body_html(paras, code, quote)


def vague_question(rng, topic):
    t = TOPICS[topic]
    thing, symptom = rng.choice(t["things"]), rng.choice(t["symptoms"])
    title = rng.choice(["%s %s", "Why %s %s", "%s %s, help"]) % (thing.capitalize(), symptom)
    opener = rng.choice(VAGUE_OPENERS).format(thing=thing, symptom=symptom)
    paras = [opener + " " + rng.choice(VAGUE_CLOSERS)]
    if rng.random() < 0.3:
        paras.append("It worked fine before.")
    return title, body_html(paras)


def tag_attr(tags):
    return "".join("<%s>" % t for t in tags)


def add_question(d, rng, topic, kind):
    t = TOPICS[topic]
    owner = rng.randint(100, 999)
    created = d.tick(rng)
    clear_style = (kind == "clear") != (rng.random() < 0.15)  # some noise
    title, body = clear_question(rng, topic) if clear_style else vague_question(rng, topic)
    tags = rng.sample(t["tags"], rng.randint(1, 3))
    q = d.post(PostTypeId=1, CreationDate=created, Score=rng.randint(-2, 15),
               ViewCount=rng.randint(10, 5000), Body=body, OwnerUserId=owner, Title=title,
               Tags=tag_attr(tags), AnswerCount=0, CommentCount=0)
    if kind == "orphan":
        del q["OwnerUserId"]
    d.edit(q["Id"], 1, owner, created, title)
    d.edit(q["Id"], 2, owner, created, body)
    d.edit(q["Id"], 3, owner, created, tag_attr(tags))

    def answer(accepted):
        a = d.post(PostTypeId=2, ParentId=q["Id"], CreationDate=d.tick(rng, 30, 900),
                   Score=rng.randint(0, 20), Body="<p>%s</p>" % rng.choice(t["answers"]),
                   OwnerUserId=rng.randint(1000, 1999))
        q["AnswerCount"] += 1
        if accepted:
            q["AcceptedAnswerId"] = a["Id"]

    if kind in ("clear", "orphan"):
        answer(True)
        return
    if kind == "unanswered":
        return
    if kind == "remark":
        d.comment(q["Id"], rng.randint(2000, 2999), rng.choice(REMARKS), d.tick(rng, 1, 60))
        q["CommentCount"] += 1
        answer(True)
        return
    # unclear / silent: someone asks for clarification
    asker = rng.randint(2000, 2999)
    n = rng.randint(1, 2)
    for cq in rng.sample(t["clarq"], n):
        d.comment(q["Id"], asker, rng.choice(["", "Hi. ", "Thanks. "]) + cq, d.tick(rng, 1, 90))
        q["CommentCount"] += 1
    if kind == "silent":
        return
    detail = rng.choice(t["details"])
    reply = rng.choice(OWNER_REPLIES).format(detail=detail)
    when = d.tick(rng, 1, 240)
    if rng.random() < 0.5:
        d.comment(q["Id"], owner, reply, when)
        q["CommentCount"] += 1
    else:
        d.edit(q["Id"], 5, owner, when, body + "<p><em>%s</em></p>" % reply)
    if rng.random() < 0.6:
        answer(rng.random() < 0.5)


def add_table_question(d, rng):
    # The similar unclear question of the xml example.
    owner, asker = 4242, 2424
    created = d.tick(rng)
    body = "<p>What software is recommended for working with and editing large XML schemas?</p>"
    q = d.post(PostTypeId=1, CreationDate=created, Score=3, ViewCount=900, Body=body,
               OwnerUserId=owner, Title="XML Editing/Viewing Software",
               Tags="<windows><xml><linux>", AnswerCount=0, CommentCount=1)
    d.edit(q["Id"], 2, owner, created, body)
    d.comment(q["Id"], asker, "What operating system?", d.tick(rng, 1, 30))
    d.edit(q["Id"], 5, owner, d.tick(rng, 1, 30),
           body + "<p><em>I'm looking for both Windows and Linux software (doesn't have to be "
                  "cross platform, just want suggestions for both)</em></p>")


def attrs(row, order):
    parts = []
    for k in order:
        if k in row:
            v = escape(str(row[k]), {'"': "&quot;", "\n": "&#xA;"})
            parts.append('%s="%s"' % (k, v))
    return " ".join(parts)


POST_ORDER = ["Id", "PostTypeId", "ParentId", "AcceptedAnswerId", "CreationDate", "Score",
              "ViewCount", "Body", "OwnerUserId", "Title", "Tags", "AnswerCount", "CommentCount"]
COMMENT_ORDER = ["Id", "PostId", "Score", "Text", "CreationDate", "UserId"]
HISTORY_ORDER = ["Id", "PostHistoryTypeId", "PostId", "CreationDate", "UserId", "Text"]


def write(path, root, rows, order):
    with open(path, "w", encoding="utf-8", newline="\n") as f:
        f.write('<?xml version="1.0" encoding="utf-8"?>\n<%s>\n' % root)
        for r in rows:
            f.write("  <row %s />\n" % attrs(r, order))
        f.write("</%s>\n" % root)


def main():
    rng = random.Random(SEED)
    d = Dump()
    kinds = ["clear"] * 60 + ["unclear"] * 140 + ["silent"] * 10 + ["unanswered"] * 8 + \
            ["remark"] * 8 + ["orphan"] * 4
    rng.shuffle(kinds)
    topics = sorted(TOPICS)
    for i, kind in enumerate(kinds):
        add_question(d, rng, topics[i % len(topics)], kind)
        if i == 57:
            add_table_question(d, rng)
    # One comment row without a date: skipped by the reader.
    d.comments.append({"Id": d.next_comment, "PostId": 1, "Text": "undated"})
    OUT.mkdir(parents=True, exist_ok=True)
    write(OUT / "Posts.xml", "posts", d.posts, POST_ORDER)
    write(OUT / "Comments.xml", "comments", d.comments, COMMENT_ORDER)
    write(OUT / "PostHistory.xml", "posthistory", d.history, HISTORY_ORDER)


if __name__ == "__main__":
    main()

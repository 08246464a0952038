//! Line-delimited corpus files.
//!
//! A page header line `{"page": <id>, "snapshot": <unix_seconds>}` is followed
//! by one line per post:
//!
//! ```text
//! {"post": <id>, "created": <unix_seconds>, "likers": [<uid>, ...], "comments": [{"author": <uid>, "created": <unix_seconds>, "likers": [<uid>, ...]}, ...]}
//! ```
//!
//! [`write_corpus`] emits exactly this canonical spacing, so loading and
//! re-writing a canonical file reproduces it byte for byte.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::Deserialize;

use super::{Comment, Corpus, CorpusError, Page, PageId, Post, PostId, UserId};

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct HeaderRecord {
    page: u64,
    snapshot: i64,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct CommentRecord {
    author: u64,
    created: i64,
    likers: Vec<u64>,
}

#[derive(Deserialize)]
#[serde(deny_unknown_fields)]
struct PostRecord {
    post: u64,
    created: i64,
    likers: Vec<u64>,
    comments: Vec<CommentRecord>,
}

pub fn load_corpus(path: impl AsRef<Path>) -> Result<Corpus, CorpusError> {
    let path = path.as_ref();
    let file = File::open(path)?;
    let mut corpus = read_corpus(BufReader::new(file))?;
    corpus.provenance = path.display().to_string();
    Ok(corpus)
}

/// Streams records from `reader`, validating every invariant as it goes.
pub fn read_corpus(reader: impl BufRead) -> Result<Corpus, CorpusError> {
    let mut pages: Vec<Page> = Vec::new();
    let mut page_ids = HashSet::new();
    let mut post_ids = HashSet::new();
    // Line of the current page's header, for snapshot errors.
    let mut header_line = 0;

    for (idx, line) in reader.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let value: serde_json::Value =
            serde_json::from_str(&line).map_err(|e| malformed(line_no, e))?;
        let obj = value
            .as_object()
            .ok_or_else(|| malformed(line_no, "record is not an object"))?;

        if obj.contains_key("page") {
            let h: HeaderRecord = serde_json::from_value(value).map_err(|e| malformed(line_no, e))?;
            if let Some(prev) = pages.last() {
                check_snapshot(prev, header_line)?;
            }
            let id = PageId(h.page);
            if !page_ids.insert(id) {
                return Err(CorpusError::DuplicatePage { line: line_no, page: id });
            }
            post_ids.clear();
            header_line = line_no;
            pages.push(Page {
                id,
                snapshot_time: h.snapshot,
                posts: Vec::new(),
            });
        } else if obj.contains_key("post") {
            let r: PostRecord = serde_json::from_value(value).map_err(|e| malformed(line_no, e))?;
            let page = pages
                .last_mut()
                .ok_or_else(|| malformed(line_no, "post record before any page header"))?;
            let post = post_from_record(r);
            if !post_ids.insert(post.id) {
                return Err(CorpusError::DuplicatePost {
                    line: line_no,
                    page: page.id,
                    post: post.id,
                });
            }
            if let Some(c) = post.comments.iter().find(|c| c.created_at < post.created_at) {
                return Err(CorpusError::CommentBeforePost {
                    line: line_no,
                    post: post.created_at,
                    comment: c.created_at,
                });
            }
            post.check().map_err(|msg| CorpusError::Invariant {
                line: Some(line_no),
                msg,
            })?;
            page.posts.push(post);
        } else {
            return Err(malformed(line_no, "expected a `page` or `post` record"));
        }
    }
    if let Some(last) = pages.last() {
        check_snapshot(last, header_line)?;
    }
    Ok(Corpus {
        pages,
        provenance: String::new(),
    })
}

fn post_from_record(r: PostRecord) -> Post {
    Post {
        id: PostId(r.post),
        created_at: r.created,
        likers: r.likers.into_iter().map(UserId).collect(),
        comments: r
            .comments
            .into_iter()
            .map(|c| Comment {
                author: UserId(c.author),
                created_at: c.created,
                likers: c.likers.into_iter().map(UserId).collect(),
            })
            .collect(),
    }
}

fn check_snapshot(page: &Page, line: usize) -> Result<(), CorpusError> {
    match page.posts.iter().map(|p| p.created_at).max() {
        Some(latest) if latest > page.snapshot_time => Err(CorpusError::Invariant {
            line: Some(line),
            msg: format!(
                "page {} snapshot {} precedes its newest post ({latest})",
                page.id, page.snapshot_time
            ),
        }),
        _ => Ok(()),
    }
}

fn malformed(line: usize, msg: impl ToString) -> CorpusError {
    CorpusError::Malformed {
        line,
        msg: msg.to_string(),
    }
}

pub fn write_corpus(corpus: &Corpus, mut out: impl Write) -> Result<(), CorpusError> {
    let mut buf = String::new();
    for page in &corpus.pages {
        buf.clear();
        writeln!(buf, "{{\"page\": {}, \"snapshot\": {}}}", page.id, page.snapshot_time).unwrap();
        out.write_all(buf.as_bytes())?;
        for post in &page.posts {
            buf.clear();
            write!(buf, "{{\"post\": {}, \"created\": {}, \"likers\": ", post.id, post.created_at)
                .unwrap();
            push_ids(&mut buf, &post.likers);
            buf.push_str(", \"comments\": [");
            for (i, c) in post.comments.iter().enumerate() {
                if i > 0 {
                    buf.push_str(", ");
                }
                write!(buf, "{{\"author\": {}, \"created\": {}, \"likers\": ", c.author, c.created_at)
                    .unwrap();
                push_ids(&mut buf, &c.likers);
                buf.push('}');
            }
            buf.push_str("]}\n");
            out.write_all(buf.as_bytes())?;
        }
    }
    out.flush()?;
    Ok(())
}

pub fn write_corpus_file(corpus: &Corpus, path: impl AsRef<Path>) -> Result<(), CorpusError> {
    let file = File::create(path)?;
    write_corpus(corpus, BufWriter::new(file))
}

fn push_ids(buf: &mut String, ids: &[UserId]) {
    buf.push('[');
    for (i, id) in ids.iter().enumerate() {
        if i > 0 {
            buf.push_str(", ");
        }
        write!(buf, "{id}").unwrap();
    }
    buf.push(']');
}

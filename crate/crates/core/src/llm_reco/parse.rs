//! Turning model replies into [`Recommendation`]s.
//!
//! Neither parser ever emits a job id outside the catalog it is given: ids
//! are resolved against that catalog and anything that looks like an id but
//! is not in it is an error.

use std::sync::LazyLock;

use regex::Regex;

use crate::domain::{canonicalize, Recommendation, SourceMethod};
use crate::error::Error;

/// Parsed recommendations plus non-fatal observations (partial results, clamps, duplicates).
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Parsed {
    pub recommendations: Vec<Recommendation>,
    pub warnings: Vec<String>,
}

static LABEL: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^[\s>#*\-+•\d.)]*[*_`]*\s*(job[\s_-]*id|benefits?|drawbacks?|qualitative(?:[\s_-]*(?:aspects?|notes?))?|score)\s*[*_`]*\s*[:=–—-]\s*[*_`]*\s*(.*?)\s*$",
    )
    .unwrap()
});

static BULLET: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*(?:[-*•+]|\d+[.)])\s+(.*?)\s*$").unwrap());

static SEPARATOR: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"^\s*(?:[-*=_]\s*){3,}$").unwrap());

static NUMBER: LazyLock<Regex> = LazyLock::new(|| Regex::new(r"\d+(?:\.\d+)?").unwrap());

static LEADING_NOISE: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^[\s#>*_`\-+•]*(?:\d+[.)]\s*)?[*_`]*\s*(?:(?:recommendation|rank|option|pick|top pick)\s*#?\d*\s*[:.)\-–—]?\s*)?(?:(?:job\s*id\b|job\b)\s*[:#\-–—]?\s*)?[*_`]*",
    )
    .unwrap()
});

static SUBHEADER: LazyLock<Regex> = LazyLock::new(|| {
    Regex::new(
        r"(?i)^[*_`]*\s*(benefits?|advantages?|pros|strengths|drawbacks?|disadvantages?|cons|concerns|gaps|qualitative(?:\s+(?:aspects?|notes?|considerations?))?|other considerations|considerations)\s*[*_`]*\s*:?\s*[*_`]*\s*$",
    )
    .unwrap()
});

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Section {
    Benefits,
    Drawbacks,
    Qualitative,
}

fn strip_markup(s: &str) -> String {
    s.trim()
        .trim_matches(|c: char| matches!(c, '*' | '_' | '`'))
        .trim()
        .to_string()
}

fn is_empty_item(s: &str) -> bool {
    matches!(canonicalize(s).as_str(), "" | "none" | "n/a" | "na" | "-" | "none.")
}

/// Resolves a token against the catalog, case-insensitively.
fn lookup<'a>(token: &str, catalog: &'a [String]) -> Option<&'a String> {
    catalog.iter().find(|id| id.eq_ignore_ascii_case(token))
}

fn looks_like_id(token: &str) -> bool {
    !token.is_empty()
        && token.len() <= 24
        && token.chars().any(|c| c.is_ascii_digit())
        && token.chars().any(|c| c.is_ascii_alphabetic())
        && token.chars().all(|c| c.is_ascii_alphanumeric() || c == '-' || c == '_')
}

fn first_token(s: &str) -> &str {
    let s = s.trim_start();
    let end = s
        .find(|c: char| c.is_whitespace() || matches!(c, ':' | ',' | '(' | ')' | '*' | '`' | '[' | ']' | '–' | '—' | ';' | '"' | '\''))
        .unwrap_or(s.len());
    s[..end].trim_end_matches(['.', '-', '_'])
}

fn tokens(s: &str) -> impl Iterator<Item = &str> {
    s.split(|c: char| !(c.is_ascii_alphanumeric() || c == '-' || c == '_'))
        .map(|t| t.trim_matches(['-', '_']))
        .filter(|t| !t.is_empty())
}

fn resolve_job_id(value: &str, catalog: &[String]) -> Result<String, Error> {
    let value = strip_markup(value);
    let head = first_token(&value);
    if let Some(id) = lookup(head, catalog) {
        return Ok(id.clone());
    }
    if let Some(id) = tokens(&value).find_map(|t| lookup(t, catalog)) {
        return Ok(id.clone());
    }
    if head.is_empty() {
        return Err(Error::Parse {
            reason: "JOB_ID label without a value".into(),
            text: value,
        });
    }
    Err(Error::UnknownJobId(head.to_string()))
}

fn classify_bullet(text: &str) -> Section {
    let c = canonicalize(text);
    const DRAWBACK: [&str; 10] = [
        "drawback", "however", "lacks", "lack of", "downside", "disadvantage", "weakness", "concern", "con:", "gap",
    ];
    const BENEFIT: [&str; 5] = ["benefit", "advantage", "strength", "perk", "pro:"];
    if DRAWBACK.iter().any(|cue| c.contains(cue)) {
        Section::Drawbacks
    } else if BENEFIT.iter().any(|cue| c.contains(cue)) {
        Section::Benefits
    } else {
        Section::Qualitative
    }
}

fn subheader_section(line: &str) -> Option<Section> {
    let caps = SUBHEADER.captures(line.trim())?;
    let word = caps[1].to_lowercase();
    Some(if word.starts_with("benefit") || word.starts_with("advantage") || word == "pros" || word == "strengths" {
        Section::Benefits
    } else if word.starts_with("drawback") || word.starts_with("disadvantage") || matches!(word.as_str(), "cons" | "concerns" | "gaps") {
        Section::Drawbacks
    } else {
        Section::Qualitative
    })
}

fn push_item(rec: &mut Recommendation, section: Section, item: String) {
    if is_empty_item(&item) {
        return;
    }
    match section {
        Section::Benefits => rec.benefits.push(item),
        Section::Drawbacks => rec.drawbacks.push(item),
        Section::Qualitative => rec.qualitative_notes.push(item),
    }
}

fn parse_score(value: &str, warnings: &mut Vec<String>, job: &str) -> Option<f64> {
    let m = NUMBER.find(value)?;
    let mut v: f64 = m.as_str().parse().ok()?;
    if value.contains('%') || (v > 1.0 && v <= 100.0) {
        v /= 100.0;
    }
    let c = v.clamp(0.0, 1.0);
    if c != v {
        warnings.push(format!("{job}: score {v} clamped to {c}"));
    }
    Some(c)
}

/// Truncates to `top_n`, drops duplicates, assigns ranks and records shortfalls.
fn finish(
    mut recs: Vec<Recommendation>,
    top_n: usize,
    mut warnings: Vec<String>,
) -> Parsed {
    let mut seen = std::collections::HashSet::new();
    recs.retain(|r| {
        let fresh = seen.insert(r.job_id.clone());
        if !fresh {
            warnings.push(format!("duplicate recommendation for {} ignored", r.job_id));
        }
        fresh
    });
    if recs.len() > top_n {
        warnings.push(format!("{} recommendations returned, keeping the first {top_n}", recs.len()));
        recs.truncate(top_n);
    }
    if recs.len() < top_n {
        warnings.push(format!("partial result: {} of {top_n} requested recommendations", recs.len()));
    }
    for (i, r) in recs.iter_mut().enumerate() {
        r.rank = i + 1;
    }
    Parsed {
        recommendations: recs,
        warnings,
    }
}

#[derive(Default)]
struct Block {
    job_id: Option<String>,
    score: Option<String>,
    benefits: Option<Vec<String>>,
    drawbacks: Option<Vec<String>>,
    qualitative: Option<Vec<String>>,
}

#[derive(Clone, Copy, PartialEq)]
enum Label {
    JobId,
    Score,
    Section(Section),
}

impl Block {
    fn has(&self, label: Label) -> bool {
        match label {
            Label::JobId => self.job_id.is_some(),
            Label::Score => self.score.is_some(),
            Label::Section(Section::Benefits) => self.benefits.is_some(),
            Label::Section(Section::Drawbacks) => self.drawbacks.is_some(),
            Label::Section(Section::Qualitative) => self.qualitative.is_some(),
        }
    }

    fn is_empty(&self) -> bool {
        self.job_id.is_none()
            && self.score.is_none()
            && self.benefits.is_none()
            && self.drawbacks.is_none()
            && self.qualitative.is_none()
    }

    fn list(&mut self, s: Section) -> &mut Vec<String> {
        match s {
            Section::Benefits => self.benefits.get_or_insert_with(Vec::new),
            Section::Drawbacks => self.drawbacks.get_or_insert_with(Vec::new),
            Section::Qualitative => self.qualitative.get_or_insert_with(Vec::new),
        }
    }
}

fn label_of(word: &str) -> Label {
    let w = word.to_lowercase();
    if w.starts_with("job") {
        Label::JobId
    } else if w.starts_with("score") {
        Label::Score
    } else if w.starts_with("benefit") {
        Label::Section(Section::Benefits)
    } else if w.starts_with("drawback") {
        Label::Section(Section::Drawbacks)
    } else {
        Label::Section(Section::Qualitative)
    }
}

/// Parses the labeled-block layout requested from guided runs.
///
/// Labels may appear in any order inside a block; a block ends when a label it
/// already has reappears, at a separator line, or at the end of the text.
/// Prose outside the labeled sections is ignored.
pub fn parse_guided(text: &str, catalog: &[String], top_n: usize) -> Result<Parsed, Error> {
    let mut blocks: Vec<Block> = Vec::new();
    let mut cur = Block::default();
    let mut section: Option<Section> = None;
    let mut after_blank = false;

    for line in text.lines() {
        if line.trim().is_empty() {
            after_blank = true;
            continue;
        }
        if SEPARATOR.is_match(line) {
            if !cur.is_empty() {
                blocks.push(std::mem::take(&mut cur));
            }
            section = None;
            after_blank = false;
            continue;
        }
        if let Some(caps) = LABEL.captures(line) {
            let label = label_of(&caps[1]);
            let value = strip_markup(&caps[2]);
            if cur.has(label) {
                blocks.push(std::mem::take(&mut cur));
            }
            section = None;
            match label {
                Label::JobId => cur.job_id = Some(value),
                Label::Score => cur.score = Some(value),
                Label::Section(s) => {
                    let list = cur.list(s);
                    if !value.is_empty() {
                        list.push(value);
                    }
                    section = Some(s);
                }
            }
            after_blank = false;
            continue;
        }
        let Some(s) = section else {
            after_blank = false;
            continue;
        };
        if let Some(b) = BULLET.captures(line) {
            cur.list(s).push(strip_markup(&b[1]));
        } else if after_blank {
            // prose after a gap closes the section
            section = None;
        } else {
            let list = cur.list(s);
            match list.last_mut() {
                Some(last) => {
                    last.push(' ');
                    last.push_str(line.trim());
                }
                None => list.push(strip_markup(line)),
            }
        }
        after_blank = false;
    }
    if !cur.is_empty() {
        blocks.push(cur);
    }

    if blocks.is_empty() {
        return Err(Error::Parse {
            reason: "no JOB_ID blocks found".into(),
            text: text.to_string(),
        });
    }
    let mut warnings = Vec::new();
    let mut recs = Vec::new();
    for block in blocks {
        let Some(raw_id) = block.job_id else {
            return Err(Error::Parse {
                reason: "labeled block without JOB_ID".into(),
                text: text.to_string(),
            });
        };
        let job_id = resolve_job_id(&raw_id, catalog)?;
        let mut rec = Recommendation::new(job_id.clone(), 0, SourceMethod::Guided);
        rec.score = block.score.and_then(|s| parse_score(&s, &mut warnings, &job_id));
        for (sec, items) in [
            (Section::Benefits, block.benefits),
            (Section::Drawbacks, block.drawbacks),
            (Section::Qualitative, block.qualitative),
        ] {
            for item in items.unwrap_or_default() {
                push_item(&mut rec, sec, item);
            }
        }
        recs.push(rec);
    }
    Ok(finish(recs, top_n, warnings))
}

enum Header {
    Job(String),
    Unknown(String),
    Plain,
}

fn is_heading_style(line: &str) -> bool {
    let t = line.trim_start();
    t.starts_with('#')
        || t.starts_with("**")
        || t.starts_with("__")
        || t.chars().next().is_some_and(|c| c.is_ascii_digit()) && {
            let digits = t.trim_start_matches(|c: char| c.is_ascii_digit());
            digits.starts_with('.') || digits.starts_with(')')
        }
        || canonicalize(t).starts_with("job id")
        || canonicalize(t).starts_with("recommendation")
}

fn header_job(line: &str, catalog: &[String]) -> (Header, String) {
    let rest = LEADING_NOISE.replace(line, "");
    let token = first_token(&rest);
    if let Some(id) = lookup(token, catalog) {
        let after = rest.trim_start()[token.len()..]
            .trim_start_matches(|c: char| c.is_whitespace() || matches!(c, ':' | '-' | '–' | '—' | '*' | '_' | '.' | ','))
            .trim_end_matches(['*', '_'])
            .trim()
            .to_string();
        return (Header::Job(id.clone()), after);
    }
    let after_token = rest.trim_start()[token.len()..].trim_start();
    let bare = after_token.is_empty() || after_token.starts_with([':', '-', '–', '—', '(', '*']);
    if is_heading_style(line) || bare {
        if looks_like_id(token) {
            return (Header::Unknown(token.to_string()), String::new());
        }
        // heading such as "**Full Stack Developer at Google (JD7)**"
        let ids: Vec<&String> = tokens(line).filter_map(|t| lookup(t, catalog)).collect();
        if let [only] = ids.as_slice() {
            return (Header::Job((*only).clone()), strip_markup(&rest));
        }
    }
    (Header::Plain, String::new())
}

struct Open {
    rec: Recommendation,
    header_rest: String,
    items: usize,
    category: Option<Section>,
}

/// Parses free-form replies made of paragraphs that each start with a job id
/// followed by bulleted explanations.
///
/// Bullets are sorted into benefits and drawbacks by cue words, or by an
/// enclosing "Benefits:" / "Drawbacks:" sub-heading; the rest become
/// qualitative notes. Parsing stops once `top_n` recommendations are open,
/// so closing remarks about rejected jobs are not mistaken for picks.
pub fn parse_unguided(text: &str, catalog: &[String], top_n: usize) -> Result<Parsed, Error> {
    let lines: Vec<&str> = text.lines().collect();
    let mut recs: Vec<Recommendation> = Vec::new();
    let mut warnings = Vec::new();
    let mut open: Option<Open> = None;
    let mut after_blank = true;
    let mut seen = std::collections::HashSet::new();
    let mut skipping = false;

    let close = |open: &mut Option<Open>, recs: &mut Vec<Recommendation>| {
        if let Some(mut o) = open.take() {
            if o.items == 0 && !o.header_rest.is_empty() {
                o.rec.qualitative_notes.push(std::mem::take(&mut o.header_rest));
            }
            recs.push(o.rec);
        }
    };

    for (idx, line) in lines.iter().enumerate() {
        if line.trim().is_empty() {
            after_blank = true;
            continue;
        }
        let bullet = BULLET.captures(line).map(|c| strip_markup(&c[1]));
        // numbered headings look like bullets; treat them as headers when they carry a job id
        let header = if bullet.is_none() || is_heading_style(line) {
            Some(header_job(line, catalog))
        } else {
            None
        };

        let followed_by_bullets = lines[idx + 1..]
            .iter()
            .find(|l| !l.trim().is_empty())
            .is_some_and(|l| BULLET.is_match(l));
        if matches!(header, Some((Header::Plain, _)))
            && after_blank
            && is_heading_style(line)
            && followed_by_bullets
            && subheader_section(line).is_none()
        {
            if recs.len() + usize::from(open.is_some()) >= top_n {
                break;
            }
            return Err(Error::Parse {
                reason: format!("recommendation paragraph without a job id: {:?}", line.trim()),
                text: text.to_string(),
            });
        }

        match header {
            Some((Header::Job(id), rest)) => {
                close(&mut open, &mut recs);
                if recs.len() >= top_n {
                    break;
                }
                if !seen.insert(id.clone()) {
                    warnings.push(format!("duplicate recommendation for {id} ignored"));
                    skipping = true;
                } else {
                    skipping = false;
                    open = Some(Open {
                        rec: Recommendation::new(id, 0, SourceMethod::Unguided),
                        header_rest: rest,
                        items: 0,
                        category: None,
                    });
                }
                after_blank = false;
                continue;
            }
            Some((Header::Unknown(tok), _)) => {
                if recs.len() + usize::from(open.is_some()) >= top_n {
                    break;
                }
                return Err(Error::UnknownJobId(tok));
            }
            Some((Header::Plain, _)) if bullet.is_none() => {
                let sub = subheader_section(line);
                if let (Some(o), Some(s)) = (open.as_mut(), sub) {
                    o.category = Some(s);
                    after_blank = false;
                    continue;
                }
                match open.as_mut() {
                    Some(o) if !after_blank && !skipping => {
                        let item = strip_markup(line);
                        let sec = o.category.unwrap_or_else(|| classify_bullet(&item));
                        push_item(&mut o.rec, sec, item);
                        o.items += 1;
                    }
                    _ => {
                        // prose between or after recommendations
                        if after_blank {
                            close(&mut open, &mut recs);
                            if recs.len() >= top_n {
                                break;
                            }
                        }
                    }
                }
                after_blank = false;
                continue;
            }
            _ => {}
        }

        let Some(item) = bullet else { continue };
        if skipping {
            continue;
        }
        if let Some(o) = open.as_mut() {
            if let Some(s) = subheader_section(&item) {
                o.category = Some(s);
            } else {
                let sec = o.category.unwrap_or_else(|| classify_bullet(&item));
                push_item(&mut o.rec, sec, item);
                o.items += 1;
            }
        }
        after_blank = false;
    }
    close(&mut open, &mut recs);

    if recs.is_empty() {
        return Err(Error::Parse {
            reason: "no paragraph starts with a known job id".into(),
            text: text.to_string(),
        });
    }
    Ok(finish(recs, top_n, warnings))
}

//! Pulling candidate hierarchy blocks out of free-form replies.

/// Incremental checker for "is this run of lines an indented tree?":
/// one root, unique labels, any monotone indentation (each leading
/// whitespace character counts one column).
struct TreeRun {
    stack: Vec<(usize, usize)>, // (indent, label id)
    labels: Vec<String>,
    lines: usize,
}

impl TreeRun {
    fn new() -> Self {
        Self {
            stack: Vec::new(),
            labels: Vec::new(),
            lines: 0,
        }
    }

    /// Feeds the next line; returns false when the run stops being a
    /// single tree (second root or duplicate label). Once false, no
    /// further line can repair the run.
    fn feed(&mut self, line: &str) -> bool {
        let name = line.trim_start();
        let indent = line.len() - name.len();
        if self.labels.iter().any(|l| l == name) {
            return false;
        }
        while self.stack.last().is_some_and(|&(col, _)| col >= indent) {
            self.stack.pop();
        }
        if self.stack.is_empty() && !self.labels.is_empty() {
            return false; // a second top-level line means a second root
        }
        self.labels.push(name.to_string());
        self.stack.push((indent, self.labels.len() - 1));
        self.lines += 1;
        true
    }
}

/// Finds the largest contiguous block of lines in `reply` that forms a
/// single indented tree of at least two lines, looking both inside and
/// outside fenced code blocks (fence lines ``` and blank lines act as
/// separators and are never part of a block). Ties go to the earliest
/// block. Returns the block text with a trailing newline, or `None`
/// when no such block exists.
pub fn extract_hierarchy(reply: &str) -> Option<String> {
    let lines: Vec<&str> = reply.lines().map(|l| l.trim_end()).collect();

    // Split into runs of consecutive content lines.
    let mut runs: Vec<(usize, usize)> = Vec::new(); // half-open [start, end)
    let mut start: Option<usize> = None;
    for (i, line) in lines.iter().enumerate() {
        let is_separator = line.trim().is_empty() || line.trim_start().starts_with("```");
        if is_separator {
            if let Some(s) = start.take() {
                runs.push((s, i));
            }
        } else if start.is_none() {
            start = Some(i);
        }
    }
    if let Some(s) = start {
        runs.push((s, lines.len()));
    }

    // Within each run, the largest tree block starting at each offset;
    // validity is prefix-closed per start, so greedy extension is exact.
    let mut best: Option<(usize, usize)> = None; // (start, len)
    for &(run_start, run_end) in &runs {
        for block_start in run_start..run_end {
            if let Some((_, len)) = best {
                // Starts too close to the run's end cannot beat the best.
                if run_end - block_start <= len {
                    continue;
                }
            }
            let mut run = TreeRun::new();
            let mut len = 0;
            for line in &lines[block_start..run_end] {
                if !run.feed(line) {
                    break;
                }
                len += 1;
            }
            if len >= 2 && best.map_or(true, |(_, best_len)| len > best_len) {
                best = Some((block_start, len));
            }
        }
    }

    best.map(|(s, len)| {
        let mut text = lines[s..s + len].join("\n");
        text.push('\n');
        text
    })
}

/// The reply minus the extracted hierarchy block and any code-fence
/// lines: the assistant's prose, used as explanation text.
pub(crate) fn prose_without_block(reply: &str, block: Option<&str>) -> String {
    let block_lines: Vec<&str> = block
        .map(|b| b.lines().map(|l| l.trim_end()).collect())
        .unwrap_or_default();
    let reply_lines: Vec<&str> = reply.lines().map(|l| l.trim_end()).collect();

    // Locate the block within the reply once, then drop those lines.
    let mut skip_range = 0..0;
    if !block_lines.is_empty() {
        for start in 0..reply_lines.len() {
            if reply_lines[start..].starts_with(&block_lines) {
                skip_range = start..start + block_lines.len();
                break;
            }
        }
    }

    let mut kept: Vec<&str> = Vec::new();
    for (i, line) in reply_lines.iter().enumerate() {
        if skip_range.contains(&i) || line.trim_start().starts_with("```") {
            continue;
        }
        kept.push(line);
    }
    let text = kept.join("\n");
    text.trim().to_string()
}

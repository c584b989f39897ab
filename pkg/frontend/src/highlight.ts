/**
 * Applies server-provided match spans to a document body.
 *
 * Spans are half-open [start, end) character offsets into the original
 * body string. The server merges overlaps before sending, but the
 * splitter tolerates unsorted or out-of-range input so a buggy payload
 * degrades to plain text instead of corrupting the document.
 */

import type { Span } from './types.js';
import { escapeHtml } from './format.js';

export interface Segment {
  text: string;
  highlighted: boolean;
}

/** Split a body into alternating plain/highlighted segments. */
export function splitByHighlights(body: string, spans: Span[]): Segment[] {
  const clamped = spans
    .map(([start, end]): Span => [
      Math.max(0, Math.min(start, body.length)),
      Math.max(0, Math.min(end, body.length)),
    ])
    .filter(([start, end]) => start < end)
    .sort((a, b) => a[0] - b[0]);

  const segments: Segment[] = [];
  let cursor = 0;
  for (const [start, end] of clamped) {
    if (start < cursor) continue; // overlap with previous span; server merges these
    if (start > cursor) {
      segments.push({ text: body.slice(cursor, start), highlighted: false });
    }
    segments.push({ text: body.slice(start, end), highlighted: true });
    cursor = end;
  }
  if (cursor < body.length) {
    segments.push({ text: body.slice(cursor), highlighted: false });
  }
  return segments;
}

/** Render a body as escaped HTML with <mark> around matched spans. */
export function highlightedBodyHtml(body: string, spans: Span[]): string {
  return splitByHighlights(body, spans)
    .map((seg) =>
      seg.highlighted ? `<mark>${escapeHtml(seg.text)}</mark>` : escapeHtml(seg.text),
    )
    .join('');
}

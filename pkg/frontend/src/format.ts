/**
 * Display formatting: HTML escaping, Portuguese class labels, numbers.
 *
 * Class labels are presentation-only translations of the server's
 * canonical class names; which fine class belongs to which group always
 * comes from /api/classes, never from this table.
 */

const FINE_CLASS_LABELS: Record<string, string> = {
  Regulation: 'Regulação',
  Deregulation: 'Desregulação',
  InstitutionalReform: 'Reforma Institucional',
  Response: 'Resposta',
  Flexibilization: 'Flexibilização',
  Neutral: 'Neutro',
  Retreat: 'Recuo',
  LawConsolidation: 'Consolidação de Leis',
  Revocation: 'Revogação',
  Privatization: 'Privatização',
  Legislation: 'Legislação',
  Planning: 'Planejamento',
};

const GROUP_LABELS: Record<string, string> = {
  Regulation: 'Regulação',
  Neutral: 'Neutro',
  Deregulation: 'Desregulação',
};

/** Portuguese label for a fine class name; unknown names pass through. */
export function fineClassLabel(name: string): string {
  return FINE_CLASS_LABELS[name] ?? name;
}

/** Portuguese label for a group class name; unknown names pass through. */
export function groupLabel(name: string): string {
  return GROUP_LABELS[name] ?? name;
}

export function escapeHtml(text: string): string {
  return text
    .replace(/&/g, '&amp;')
    .replace(/</g, '&lt;')
    .replace(/>/g, '&gt;')
    .replace(/"/g, '&quot;')
    .replace(/'/g, '&#39;');
}

/** 0.52 -> "52.0%" */
export function formatPercent(fraction: number): string {
  return `${(fraction * 100).toFixed(1)}%`;
}

/** Metric value to three decimals: 0.6012 -> "0.601". */
export function formatScore(value: number): string {
  return value.toFixed(3);
}

/** "0.601 ± 0.080" */
export function formatMeanStd(mean: number, std: number): string {
  return `${formatScore(mean)} ± ${formatScore(std)}`;
}

/** "2019-01-15 – 2020-03-01"; a single-day range collapses to one date. */
export function formatDateRange(dateMin: string, dateMax: string): string {
  if (dateMin === dateMax) return dateMin;
  return `${dateMin} – ${dateMax}`;
}

/**
 * The rule-file line a suggestion proposes, ready to paste into a theme
 * block. The UI only offers this as copyable text; it never edits rules.
 */
export function suggestionRuleText(direction: string, token: string): string {
  const keyword = direction === 'add_exclude' ? 'exclude' : 'include';
  return `${keyword}: "${token}"`;
}

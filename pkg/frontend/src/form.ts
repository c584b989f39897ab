/**
 * Validation for the annotation form.
 *
 * Mirrors what the server will accept so the submit button can stay
 * disabled until a request would succeed, but the server remains the
 * authority: its 422 responses are still surfaced inline.
 */

import type { Annotation, ClassCatalog } from './types.js';

export interface FormState {
  action: string;
  circumstance: string;
  classification: string;
}

export interface ValidationResult {
  ok: boolean;
  /** Field name -> problem, for inline display next to each input. */
  problems: Partial<Record<keyof FormState, string>>;
}

export function validateAnnotation(
  form: FormState,
  catalog: ClassCatalog | null,
): ValidationResult {
  const problems: ValidationResult['problems'] = {};
  if (form.action.trim() === '') {
    problems.action = 'Describe the act (required)';
  }
  if (form.circumstance.trim() === '') {
    problems.circumstance = 'Describe the circumstance (required)';
  }
  if (form.classification === '') {
    problems.classification = 'Pick a classification';
  } else if (
    catalog !== null &&
    !catalog.fine.some((c) => c.name === form.classification)
  ) {
    problems.classification = `Unknown classification ${form.classification}`;
  }
  return { ok: Object.keys(problems).length === 0, problems };
}

/** A validated form becomes the request body as-is (values are trimmed). */
export function toAnnotation(form: FormState): Annotation {
  return {
    action: form.action.trim(),
    circumstance: form.circumstance.trim(),
    classification: form.classification,
  };
}

/** Group name for a selected fine class, straight from the server catalog. */
export function groupOfFineClass(catalog: ClassCatalog, fineName: string): string | null {
  const entry = catalog.fine.find((c) => c.name === fineName);
  return entry ? entry.group : null;
}

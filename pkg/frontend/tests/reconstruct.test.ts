// applyFixEdits must agree byte-for-byte with the server's reconstruction;
// every fixture's "expected" value came from the server implementation.

import { describe, expect, it } from 'vitest';
import fixtures from './fixtures/fix_reconstruction.json';
import { applyFixEdits } from '../src/reconstruct.js';

describe('applyFixEdits', () => {
  for (const fixture of fixtures) {
    it(`reconstructs ${JSON.stringify(fixture.noisy_text.slice(0, 24))}`, () => {
      expect(applyFixEdits(fixture.noisy_text, fixture.edits)).toBe(fixture.expected);
    });
  }

  it('rejects out-of-range indices', () => {
    expect(() => applyFixEdits('two tokens', [{ index: 5, replacement: 'x' }])).toThrow();
  });
});

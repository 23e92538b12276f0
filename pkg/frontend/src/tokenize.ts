// Shared tokenization contract with the server: tokens are maximal runs of
// non-whitespace characters. New-line errors put "\n" inside served text, so
// splitting must treat any whitespace run as one boundary, exactly like the
// server does when it scores selections by token index.

export interface Token {
  index: number;
  text: string;
  start: number;
  end: number;
}

export function tokenize(text: string): Token[] {
  const tokens: Token[] = [];
  const re = /\S+/g;
  let match: RegExpExecArray | null;
  let index = 0;
  while ((match = re.exec(text)) !== null) {
    tokens.push({
      index,
      text: match[0],
      start: match.index,
      end: match.index + match[0].length,
    });
    index += 1;
  }
  return tokens;
}

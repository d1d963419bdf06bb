/**
 * JSON scanner that keeps the exact source slice of every value.
 *
 * The client must display the server's decimal strings verbatim.
 * Re-serializing a parsed number drifts: JavaScript and the server
 * format shortest round-trip decimals differently (`1e-7` vs `1e-07`),
 * so display strings are sliced straight out of the response text.
 */

export interface RawNode {
  /** Exact substring of the source text for this value. */
  raw: string;
  object?: Map<string, RawNode>;
  array?: RawNode[];
}

class Scanner {
  private pos = 0;

  constructor(private readonly text: string) {}

  scan(): RawNode {
    const node = this.value();
    this.skipWhitespace();
    if (this.pos !== this.text.length) {
      throw new SyntaxError(`trailing characters at offset ${this.pos}`);
    }
    return node;
  }

  private value(): RawNode {
    this.skipWhitespace();
    const ch = this.text[this.pos];
    if (ch === undefined) throw new SyntaxError("unexpected end of input");
    if (ch === "{") return this.objectValue();
    if (ch === "[") return this.arrayValue();
    if (ch === '"') {
      const start = this.pos;
      this.stringBody();
      return { raw: this.text.slice(start, this.pos) };
    }
    return { raw: this.scalar() };
  }

  private objectValue(): RawNode {
    const start = this.pos;
    const object = new Map<string, RawNode>();
    this.pos++; // consume {
    this.skipWhitespace();
    if (this.text[this.pos] === "}") {
      this.pos++;
      return { raw: this.text.slice(start, this.pos), object };
    }
    for (;;) {
      this.skipWhitespace();
      if (this.text[this.pos] !== '"') {
        throw new SyntaxError(`expected object key at offset ${this.pos}`);
      }
      const keyStart = this.pos;
      this.stringBody();
      const key = JSON.parse(this.text.slice(keyStart, this.pos)) as string;
      this.skipWhitespace();
      if (this.text[this.pos] !== ":") {
        throw new SyntaxError(`expected ':' at offset ${this.pos}`);
      }
      this.pos++;
      object.set(key, this.value());
      this.skipWhitespace();
      const sep = this.text[this.pos];
      this.pos++;
      if (sep === "}") break;
      if (sep !== ",") throw new SyntaxError(`expected ',' or '}' at offset ${this.pos - 1}`);
    }
    return { raw: this.text.slice(start, this.pos), object };
  }

  private arrayValue(): RawNode {
    const start = this.pos;
    const array: RawNode[] = [];
    this.pos++; // consume [
    this.skipWhitespace();
    if (this.text[this.pos] === "]") {
      this.pos++;
      return { raw: this.text.slice(start, this.pos), array };
    }
    for (;;) {
      array.push(this.value());
      this.skipWhitespace();
      const sep = this.text[this.pos];
      this.pos++;
      if (sep === "]") break;
      if (sep !== ",") throw new SyntaxError(`expected ',' or ']' at offset ${this.pos - 1}`);
    }
    return { raw: this.text.slice(start, this.pos), array };
  }

  private stringBody(): void {
    this.pos++; // opening quote
    for (;;) {
      const ch = this.text[this.pos];
      if (ch === undefined) throw new SyntaxError("unterminated string");
      this.pos++;
      if (ch === "\\") this.pos++;
      else if (ch === '"') return;
    }
  }

  private scalar(): string {
    const start = this.pos;
    while (this.pos < this.text.length && !'},] \t\n\r'.includes(this.text[this.pos]!)) {
      this.pos++;
    }
    const raw = this.text.slice(start, this.pos);
    if (raw.length === 0) throw new SyntaxError(`empty value at offset ${start}`);
    return raw;
  }

  private skipWhitespace(): void {
    while (" \t\n\r".includes(this.text[this.pos] ?? "x")) this.pos++;
  }
}

export function scanJson(text: string): RawNode {
  return new Scanner(text).scan();
}

export function field(node: RawNode, key: string): RawNode {
  const child = node.object?.get(key);
  if (!child) throw new Error(`missing field ${JSON.stringify(key)}`);
  return child;
}

export function items(node: RawNode): RawNode[] {
  if (!node.array) throw new Error("not an array value");
  return node.array;
}
